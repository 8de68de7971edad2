#pragma once
// Helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "pxplore/corpus.hpp"
#include "pxplore/reward.hpp"
#include "pxplore/rng.hpp"
#include "pxplore/state.hpp"
#include "pxplore/training.hpp"

namespace pxplore::testing {

inline StateComponent component(const std::string& id, Dimension d, double confidence,
                                const std::string& description = "goal") {
  StateComponent c;
  c.id = id;
  c.dimension = d;
  c.description = description;
  c.metric_name = "metric";
  c.threshold = 0.7;
  c.confidence = confidence;
  return c;
}

// State at timestep 1 with the given statuses; new_state forces NOT_ALIGNED,
// so statuses are applied on the successor.
inline LearnerState state_with(const std::vector<std::pair<StateComponent, bool>>& spec) {
  std::vector<StateComponent> cs;
  for (const auto& [c, aligned] : spec) cs.push_back(c);
  LearnerState s = new_state(cs).successor();
  for (const auto& [c, aligned] : spec) {
    s.mutable_component(c.id).status = aligned ? ComponentStatus::kAligned : ComponentStatus::kNotAligned;
  }
  return s;
}

struct StatePair {
  LearnerState prev;
  LearnerState next;
};

// Consecutive states with random statuses, confidences, flips and a chance
// of brand-new components in `next`.
inline StatePair random_state_pair(Rng& rng) {
  const int n = static_cast<int>(rng.uniform_int(0, 8));
  std::vector<std::pair<StateComponent, bool>> spec;
  for (int i = 0; i < n; ++i) {
    const auto d = static_cast<Dimension>(rng.uniform_int(0, kDimensions - 1));
    spec.push_back({component("c" + std::to_string(i), d, rng.uniform()), rng.bernoulli(0.5)});
  }
  StatePair p;
  p.prev = state_with(spec);
  p.next = p.prev.successor();
  for (const auto& [c, aligned] : spec) {
    StateComponent& nc = p.next.mutable_component(c.id);
    if (rng.bernoulli(0.4)) nc.status = nc.aligned() ? ComponentStatus::kNotAligned : ComponentStatus::kAligned;
    nc.confidence = rng.uniform();
  }
  const int fresh = static_cast<int>(rng.uniform_int(0, 2));
  for (int i = 0; i < fresh; ++i) {
    auto c = component("new" + std::to_string(i), static_cast<Dimension>(rng.uniform_int(0, 3)), rng.uniform());
    c.status = rng.bernoulli(0.5) ? ComponentStatus::kAligned : ComponentStatus::kNotAligned;
    p.next.add_component(c);
  }
  return p;
}

inline RewardWeights random_weights(Rng& rng) {
  RewardWeights w;
  for (auto& x : w.per_dimension) x = rng.uniform(0.0, 3.0);
  return w;
}

// Direct enumeration of C(s_next) with the φ-absent = 0 convention.
inline double brute_force_reward(const LearnerState& prev, const LearnerState& next,
                                 const RewardWeights& w) {
  double total = 0.0;
  for (const auto& [id, c] : next.components()) {
    const StateComponent* before = prev.find(id);
    const double phi_next = c.status == ComponentStatus::kAligned ? 1.0 : 0.0;
    const double phi_prev = before != nullptr && before->status == ComponentStatus::kAligned ? 1.0 : 0.0;
    double term = w.per_dimension[static_cast<std::size_t>(c.dimension)] * c.confidence * (phi_next - phi_prev);
    if (w.clamp_negative && term < 0.0) term = 0.0;
    total += term;
  }
  return total;
}

inline LearningAction action(const std::string& id, std::vector<std::string> keywords,
                             Bloom bloom = Bloom::kUnderstanding, std::vector<std::string> body = {},
                             const std::string& topic = "") {
  LearningAction a;
  a.id = id;
  a.title = id;
  a.summary = id;
  a.keywords = TokenSet(keywords.begin(), keywords.end());
  a.bloom = bloom;
  a.body_tokens = body;
  a.topic = topic;
  return a;
}

inline PolicyParams random_params(Rng& rng, double scale = 1.0) {
  PolicyParams p;
  for (auto& x : p.theta) x = rng.uniform(-scale, scale);
  p.temperature = rng.uniform(0.3, 1.5);
  return p;
}

inline std::vector<double> theta_vec(const PolicyParams& p) { return {p.theta.begin(), p.theta.end()}; }

inline PolicyParams with_theta(PolicyParams p, std::span<const double> t) {
  std::copy(t.begin(), t.end(), p.theta.begin());
  return p;
}

inline Decision random_decision(Rng& rng, std::size_t rows) {
  Decision d;
  d.features.resize(rows * kFeatureDim);
  for (auto& x : d.features) x = rng.uniform(-1.0, 1.0);
  d.chosen = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(rows) - 1));
  return d;
}

inline double log_prob_of(const PolicyParams& p, const Decision& d) {
  std::vector<double> probs, log_probs;
  softmax(policy_logits(p, d.features), probs, log_probs);
  return log_probs[d.chosen];
}

// Group of G trajectories with T steps each over random decisions. Behaviour
// log-probs come from `old` perturbed slightly so ratios differ from 1.
inline Group random_group(Rng& rng, const PolicyParams& old, int trajectories, int steps) {
  Group g(static_cast<std::size_t>(trajectories));
  for (auto& traj : g) {
    for (int t = 0; t < steps; ++t) {
      TrajectoryStep s;
      s.decision = random_decision(rng, static_cast<std::size_t>(rng.uniform_int(2, 10)));
      s.chosen_index = s.decision.chosen;
      s.log_prob_old = log_prob_of(old, s.decision) + rng.uniform(-0.2, 0.2);
      s.reward = rng.uniform(-1.0, 2.0);
      s.value_s = rng.uniform(-1.0, 1.0);
      s.value_s_next = t + 1 == steps ? 0.0 : rng.uniform(-1.0, 1.0);
      s.terminal = t + 1 == steps;
      traj.push_back(std::move(s));
    }
  }
  return g;
}

}  // namespace pxplore::testing
