#pragma once
// Learner State Model: four dimensions of status-tracked goal and motivation
// components, plus the pure bookkeeping used by the reward (diffs, rates).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pxplore {

enum class ComponentStatus { kNotAligned, kAligned };

enum class Dimension {
  kLongTermObjective = 0,   // O_L
  kShortTermObjective = 1,  // O_S
  kImplicitMotivation = 2,  // M_I
  kExplicitMotivation = 3,  // M_E
};

inline constexpr int kDimensions = 4;
inline constexpr std::array<Dimension, kDimensions> kAllDimensions = {
    Dimension::kLongTermObjective, Dimension::kShortTermObjective,
    Dimension::kImplicitMotivation, Dimension::kExplicitMotivation};

// "O_L" | "O_S" | "M_I" | "M_E"
std::string_view dimension_code(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view code);
inline int index_of(Dimension d) { return static_cast<int>(d); }

struct EvidenceItem {
  int turn_index = 0;
  std::string quote;

  bool operator==(const EvidenceItem&) const = default;
};

struct StateComponent {
  std::string id;
  Dimension dimension = Dimension::kLongTermObjective;
  std::string description;
  std::string metric_name;
  double threshold = 0.0;   // in [0, 1]
  std::vector<EvidenceItem> evidence;
  double confidence = 0.0;  // in [0, 1]
  ComponentStatus status = ComponentStatus::kNotAligned;

  bool aligned() const { return status == ComponentStatus::kAligned; }
  bool operator==(const StateComponent&) const = default;
};

class LearnerState {
 public:
  LearnerState() = default;

  int timestep() const { return timestep_; }
  const std::map<std::string, StateComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  const StateComponent* find(std::string_view id) const;
  std::vector<const StateComponent*> in_dimension(Dimension d) const;

  // Successor skeleton: same components, timestep + 1. Used by transition
  // functions that then edit statuses and add components.
  LearnerState successor() const;
  StateComponent& mutable_component(const std::string& id);
  // Adds a component; throws InvalidArgument on duplicate id or out-of-range
  // confidence/threshold.
  void add_component(StateComponent c);

  bool operator==(const LearnerState&) const = default;

 private:
  friend LearnerState new_state(std::vector<StateComponent> components);
  friend LearnerState state_from_json(const nlohmann::json& j);

  int timestep_ = 0;
  std::map<std::string, StateComponent> components_;
};

// Initial state s_0: timestep 0, all components forced to NOT_ALIGNED.
LearnerState new_state(std::vector<StateComponent> components);

// φ(s, c): 1 iff the component exists in `state` and is ALIGNED.
int aligned_indicator(const LearnerState& state, std::string_view component_id);

struct StateDiff {
  struct Entry {
    std::string component_id;
    int delta = 0;  // φ(next) - φ(prev), absent-in-prev counts as 0
  };
  std::vector<Entry> entries;               // one per component of s_next
  std::vector<std::string> new_components;  // ids absent from s_prev
};

StateDiff diff_states(const LearnerState& prev, const LearnerState& next);

// Aligned / total over the scope; 0 for an empty scope.
double alignment_rate(const LearnerState& state, std::optional<Dimension> dimension);

nlohmann::json to_json(const LearnerState& s);
LearnerState state_from_json(const nlohmann::json& j);

}  // namespace pxplore
