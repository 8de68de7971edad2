#pragma once
// Alignment reward over learner-state transitions and discounted returns.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/state.hpp"

namespace pxplore {

struct RewardWeights {
  std::array<double, kDimensions> per_dimension{1.0, 1.0, 1.0, 1.0};
  // Zeroes negative (regression) terms when set. Off by default.
  bool clamp_negative = false;

  double weight(Dimension d) const { return per_dimension[static_cast<std::size_t>(d)]; }
};

struct RewardTerm {
  std::string component_id;
  Dimension dimension = Dimension::kLongTermObjective;
  int delta = 0;
  double confidence_used = 0.0;
  double weight = 0.0;
  double term_value = 0.0;
};

struct RewardBreakdown {
  double total = 0.0;
  std::vector<RewardTerm> contributions;

  // Sum of term values for one dimension.
  double dimension_total(Dimension d) const;
};

// R = Σ_{c ∈ C(next)} w_c · conf(next, c) · [φ(next, c) − φ(prev, c)].
// Throws InvalidArgument when next is not prev's successor or a weight is
// negative.
RewardBreakdown compute_reward(const LearnerState& prev, const LearnerState& next,
                               const RewardWeights& weights = {});

// Σ_t γ^(t−1) R_t; γ must lie in [0, 1].
double cumulative_return(std::span<const double> rewards, double gamma);

nlohmann::json to_json(const RewardBreakdown& r);

}  // namespace pxplore
