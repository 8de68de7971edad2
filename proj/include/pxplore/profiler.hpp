#pragma once
// Rule-based learner profiling: behavioral indicators, keyword-rule message
// annotation, and profile synthesis with persona classification.

#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pxplore/bloom.hpp"
#include "pxplore/interaction.hpp"
#include "pxplore/text.hpp"

namespace pxplore {

struct ProfilerConfig {
  double dwell_cap_seconds = 600.0;
  double revisit_cap = 5.0;
  double no_quiz_understanding = 0.5;
  double struggle_below = 0.5;       // understanding < this -> Struggler
  double consolidate_at = 0.6;       // review_intensity >= this -> Consolidator
  int explore_breadth = 8;           // distinct interest tokens -> Explorer
  double cognition_low = 0.33;
  double cognition_mid = 0.66;
  std::size_t max_interest_tokens = 20;
};

struct BehavioralIndicators {
  double engagement = 0.0;
  double review_intensity = 0.0;
  double understanding = 0.0;

  bool operator==(const BehavioralIndicators&) const = default;
};

enum class Persona { kMomentumLearner = 0, kConsolidator = 1, kExplorer = 2, kStruggler = 3 };
inline constexpr int kPersonas = 4;

std::string_view persona_name(Persona p);
std::optional<Persona> parse_persona(std::string_view name);

struct LearnerProfile {
  Bloom cognition = Bloom::kUnderstanding;
  double engagement = 0.0;
  TokenBag interest;  // at most max_interest_tokens entries, weights >= 0
  Persona persona = Persona::kMomentumLearner;
  BehavioralIndicators indicators;

  bool operator==(const LearnerProfile&) const = default;
};

// Stage 2 annotation of a message bag: content tokens (stopwords and intent
// markers removed) and intent counts.
struct MessageAnnotation {
  TokenBag content;
  int questions = 0;
  int review_requests = 0;
  int exploration_requests = 0;
};

BehavioralIndicators analyze_behavior(const InteractionSummary& summary,
                                      const ProfilerConfig& config = {});
MessageAnnotation annotate_messages(const TokenBag& messages);
Persona classify_persona(const BehavioralIndicators& ind, int interest_breadth,
                         const ProfilerConfig& config = {});
Bloom cognition_from_understanding(double understanding, const ProfilerConfig& config = {});

// Throws InvalidArgument for an empty summary list.
LearnerProfile build_profile(const std::vector<InteractionSummary>& summaries,
                             const TokenBag& session_keywords,
                             const ProfilerConfig& config = {});

// Retrieval query for a profile: weighted interest plus persona and cognition
// pseudo-tokens.
TokenBag profile_query(const LearnerProfile& p);

nlohmann::json to_json(const LearnerProfile& p);
LearnerProfile profile_from_json(const nlohmann::json& j);

}  // namespace pxplore
