#include "pxplore/reward.hpp"

#include "pxplore/error.hpp"

namespace pxplore {

double RewardBreakdown::dimension_total(Dimension d) const {
  double sum = 0.0;
  for (const auto& t : contributions) {
    if (t.dimension == d) sum += t.term_value;
  }
  return sum;
}

RewardBreakdown compute_reward(const LearnerState& prev, const LearnerState& next,
                               const RewardWeights& weights) {
  for (double w : weights.per_dimension) {
    if (!(w >= 0.0)) throw InvalidArgument("reward weights must be non-negative");
  }
  const StateDiff diff = diff_states(prev, next);
  RewardBreakdown out;
  out.contributions.reserve(diff.entries.size());
  for (const auto& entry : diff.entries) {
    const StateComponent& c = *next.find(entry.component_id);
    RewardTerm term;
    term.component_id = entry.component_id;
    term.dimension = c.dimension;
    term.delta = entry.delta;
    term.confidence_used = c.confidence;
    term.weight = weights.weight(c.dimension);
    term.term_value = term.weight * term.confidence_used * static_cast<double>(term.delta);
    if (weights.clamp_negative && term.term_value < 0.0) term.term_value = 0.0;
    out.total += term.term_value;
    out.contributions.push_back(std::move(term));
  }
  return out;
}

double cumulative_return(std::span<const double> rewards, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma outside [0,1]");
  double total = 0.0;
  double discount = 1.0;
  for (double r : rewards) {
    total += discount * r;
    discount *= gamma;
  }
  return total;
}

nlohmann::json to_json(const RewardBreakdown& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.contributions) {
    terms.push_back({{"component_id", t.component_id},
                     {"dimension", dimension_code(t.dimension)},
                     {"delta", t.delta},
                     {"confidence_used", t.confidence_used},
                     {"weight", t.weight},
                     {"term_value", t.term_value}});
  }
  return {{"total", r.total}, {"contributions", std::move(terms)}};
}

}  // namespace pxplore
