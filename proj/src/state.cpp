#include "pxplore/state.hpp"

#include <array>

#include "pxplore/bloom.hpp"
#include "pxplore/error.hpp"

namespace pxplore {

namespace {

constexpr std::array<std::string_view, kBloomLevels> kBloomNames = {
    "Remembering", "Understanding", "Applying", "Analyzing", "Evaluating", "Creating"};

void check_unit_interval(double v, const char* field, const std::string& id) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument("component " + id + ": " + field + " outside [0,1]");
  }
}

}  // namespace

std::string_view bloom_name(Bloom b) { return kBloomNames.at(static_cast<std::size_t>(b)); }

std::optional<Bloom> parse_bloom(std::string_view name) {
  for (std::size_t i = 0; i < kBloomNames.size(); ++i) {
    if (kBloomNames[i] == name) return static_cast<Bloom>(i);
  }
  return std::nullopt;
}

std::string_view dimension_code(Dimension d) {
  switch (d) {
    case Dimension::kLongTermObjective: return "O_L";
    case Dimension::kShortTermObjective: return "O_S";
    case Dimension::kImplicitMotivation: return "M_I";
    case Dimension::kExplicitMotivation: return "M_E";
  }
  return "?";
}

std::optional<Dimension> parse_dimension(std::string_view code) {
  for (Dimension d : kAllDimensions) {
    if (dimension_code(d) == code) return d;
  }
  return std::nullopt;
}

const StateComponent* LearnerState::find(std::string_view id) const {
  auto it = components_.find(std::string(id));
  return it == components_.end() ? nullptr : &it->second;
}

std::vector<const StateComponent*> LearnerState::in_dimension(Dimension d) const {
  std::vector<const StateComponent*> out;
  for (const auto& [id, c] : components_) {
    if (c.dimension == d) out.push_back(&c);
  }
  return out;
}

LearnerState LearnerState::successor() const {
  LearnerState next = *this;
  next.timestep_ = timestep_ + 1;
  return next;
}

StateComponent& LearnerState::mutable_component(const std::string& id) {
  auto it = components_.find(id);
  if (it == components_.end()) throw InvalidArgument("unknown component id: " + id);
  return it->second;
}

void LearnerState::add_component(StateComponent c) {
  check_unit_interval(c.confidence, "confidence", c.id);
  check_unit_interval(c.threshold, "threshold", c.id);
  std::string id = c.id;
  auto [it, inserted] = components_.emplace(id, std::move(c));
  if (!inserted) throw InvalidArgument("duplicate component id: " + id);
}

LearnerState new_state(std::vector<StateComponent> components) {
  LearnerState s;
  for (auto& c : components) {
    c.status = ComponentStatus::kNotAligned;
    s.add_component(std::move(c));
  }
  return s;
}

int aligned_indicator(const LearnerState& state, std::string_view component_id) {
  const StateComponent* c = state.find(component_id);
  return (c != nullptr && c->aligned()) ? 1 : 0;
}

StateDiff diff_states(const LearnerState& prev, const LearnerState& next) {
  if (next.timestep() != prev.timestep() + 1) {
    throw InvalidArgument("diff_states: non-consecutive timesteps " +
                          std::to_string(prev.timestep()) + " -> " +
                          std::to_string(next.timestep()));
  }
  StateDiff diff;
  diff.entries.reserve(next.size());
  for (const auto& [id, c] : next.components()) {
    if (prev.find(id) == nullptr) diff.new_components.push_back(id);
    diff.entries.push_back({id, aligned_indicator(next, id) - aligned_indicator(prev, id)});
  }
  return diff;
}

double alignment_rate(const LearnerState& state, std::optional<Dimension> dimension) {
  std::size_t total = 0;
  std::size_t aligned = 0;
  for (const auto& [id, c] : state.components()) {
    if (dimension && c.dimension != *dimension) continue;
    ++total;
    if (c.aligned()) ++aligned;
  }
  return total == 0 ? 0.0 : static_cast<double>(aligned) / static_cast<double>(total);
}

nlohmann::json to_json(const LearnerState& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [id, c] : s.components()) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : c.evidence) ev.push_back({{"turn", e.turn_index}, {"quote", e.quote}});
    comps.push_back({{"id", c.id},
                     {"dimension", dimension_code(c.dimension)},
                     {"description", c.description},
                     {"metric_name", c.metric_name},
                     {"threshold", c.threshold},
                     {"evidence", std::move(ev)},
                     {"confidence", c.confidence},
                     {"status", c.aligned() ? "ALIGNED" : "NOT_ALIGNED"}});
  }
  return {{"timestep", s.timestep()}, {"components", std::move(comps)}};
}

LearnerState state_from_json(const nlohmann::json& j) {
  try {
    LearnerState s;
    s.timestep_ = j.at("timestep").get<int>();
    if (s.timestep_ < 0) throw FormatError("state: negative timestep");
    for (const auto& jc : j.at("components")) {
      StateComponent c;
      c.id = jc.at("id").get<std::string>();
      const auto dim = parse_dimension(jc.at("dimension").get<std::string>());
      if (!dim) throw FormatError("state: bad dimension for component " + c.id);
      c.dimension = *dim;
      c.description = jc.value("description", "");
      c.metric_name = jc.value("metric_name", "");
      c.threshold = jc.at("threshold").get<double>();
      for (const auto& je : jc.value("evidence", nlohmann::json::array())) {
        c.evidence.push_back({je.at("turn").get<int>(), je.at("quote").get<std::string>()});
      }
      c.confidence = jc.at("confidence").get<double>();
      const auto status = jc.at("status").get<std::string>();
      if (status == "ALIGNED") {
        c.status = ComponentStatus::kAligned;
      } else if (status == "NOT_ALIGNED") {
        c.status = ComponentStatus::kNotAligned;
      } else {
        throw FormatError("state: bad status '" + status + "' for component " + c.id);
      }
      s.add_component(std::move(c));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("state: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("state: ") + e.what());
  }
}

}  // namespace pxplore
