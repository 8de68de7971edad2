#pragma once

#include <vector>

#include "json.hpp"
#include "pxplore/text.hpp"

namespace pxplore {

// Aggregated interaction data for one learning action (or one pre-path
// session segment): navigation, dwell, review and quiz signals plus the
// learner's message tokens.
struct InteractionSummary {
  int turns = 0;
  double dwell_seconds = 0.0;
  int revisits = 0;
  int quiz_correct = 0;
  int quiz_total = 0;
  TokenBag message_tokens;

  bool operator==(const InteractionSummary&) const = default;
};

nlohmann::json to_json(const InteractionSummary& s);
InteractionSummary interaction_from_json(const nlohmann::json& j);

// Sum of message-token bags across a session.
TokenBag session_keywords(const std::vector<InteractionSummary>& summaries);

}  // namespace pxplore
