#include "pxplore/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pxplore/error.hpp"
#include "pxplore/reward.hpp"
#include "pxplore/rng.hpp"
#include "pxplore/sim.hpp"
#include "pxplore/simd.hpp"

namespace pxplore {

namespace {

constexpr std::string_view kLayoutDescriptor =
    "pxplore.features.v1:unaligned_count[O_L,O_S,M_I,M_E];"
    "unaligned_mean_conf[O_L,O_S,M_I,M_E];jaccard_goal_keywords;bloom_distance;"
    "persona[Momentum,Consolidator,Explorer,Struggler];engagement;bias|"
    "value:0..7+bias";

constexpr int kCheckpointVersion = 1;

std::string argmax_id(std::span<const std::string> ids, std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (scores[i] > scores[best] || (scores[i] == scores[best] && ids[i] < ids[best])) best = i;
  }
  return ids[best];
}

}  // namespace

std::string feature_layout_hash() {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(kLayoutDescriptor)));
  return buf;
}

FeatureContext feature_context(const LearnerState& state, const LearnerProfile& profile) {
  FeatureContext ctx;
  std::array<int, kDimensions> counts{};
  std::array<double, kDimensions> conf_sum{};
  for (const auto& [id, c] : state.components()) {
    if (c.aligned()) continue;
    const auto d = static_cast<std::size_t>(c.dimension);
    counts[d] += 1;
    conf_sum[d] += c.confidence;
    for (auto& t : tokenize(c.description)) ctx.goal_tokens.insert(std::move(t));
  }
  for (std::size_t d = 0; d < kDimensions; ++d) {
    ctx.state_block[d] = counts[d];
    ctx.state_block[4 + d] = counts[d] > 0 ? conf_sum[d] / counts[d] : 0.0;
  }
  for (const auto& [t, w] : profile.interest) ctx.goal_tokens.insert(t);
  ctx.profile_block[static_cast<std::size_t>(profile.persona)] = 1.0;
  ctx.profile_block[4] = profile.engagement;
  ctx.profile_block[5] = 1.0;
  ctx.cognition = profile.cognition;
  return ctx;
}

FeatureVector featurize(const FeatureContext& ctx, const LearningAction& action) {
  FeatureVector f{};
  std::copy(ctx.state_block.begin(), ctx.state_block.end(), f.begin());
  f[kJaccardFeature] = jaccard(action.keywords, ctx.goal_tokens);
  f[kBloomFeature] = bloom_distance(action.bloom, ctx.cognition);
  std::copy(ctx.profile_block.begin(), ctx.profile_block.end(), f.begin() + 10);
  return f;
}

FeatureVector featurize(const LearnerState& state, const LearnerProfile& profile,
                        const LearningAction& action) {
  return featurize(feature_context(state, profile), action);
}

StateFeatureVector state_features(const LearnerState& state, const LearnerProfile& profile) {
  const FeatureContext ctx = feature_context(state, profile);
  StateFeatureVector s{};
  std::copy(ctx.state_block.begin(), ctx.state_block.end(), s.begin());
  s[8] = 1.0;
  return s;
}

std::vector<double> feature_matrix(const LearnerState& state, const LearnerProfile& profile,
                                   const KnowledgeCorpus& corpus,
                                   std::span<const std::string> candidates) {
  const FeatureContext ctx = feature_context(state, profile);
  std::vector<double> m;
  m.reserve(candidates.size() * kFeatureDim);
  for (const auto& id : candidates) {
    const FeatureVector f = featurize(ctx, corpus.at(id));
    m.insert(m.end(), f.begin(), f.end());
  }
  return m;
}

std::vector<double> policy_logits(const PolicyParams& params, std::span<const double> features) {
  if (!(params.temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  std::vector<double> logits(features.size() / kFeatureDim);
  simd::gemv(features, kFeatureDim, params.theta, logits);
  for (double& l : logits) l /= params.temperature;
  return logits;
}

void softmax(std::span<const double> logits, std::vector<double>& probs,
             std::vector<double>& log_probs) {
  const double top = simd::max(logits);
  probs.resize(logits.size());
  log_probs.resize(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - top);
    total += probs[i];
  }
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] /= total;
    log_probs[i] = logits[i] - top - log_total;
  }
}

ActionDistribution action_distribution(const PolicyParams& params, const LearnerState& state,
                                       const LearnerProfile& profile,
                                       const KnowledgeCorpus& corpus,
                                       std::span<const std::string> candidates) {
  if (candidates.empty()) throw InvalidArgument("action_distribution: empty candidate set");
  const auto features = feature_matrix(state, profile, corpus, candidates);
  ActionDistribution dist;
  dist.support.assign(candidates.begin(), candidates.end());
  softmax(policy_logits(params, features), dist.probs, dist.log_probs);
  return dist;
}

SampledAction sample_action_at(const ActionDistribution& dist, double u) {
  if (dist.support.empty()) throw InvalidArgument("sample_action: empty distribution");
  double cdf = 0.0;
  std::size_t pick = dist.support.size() - 1;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    cdf += dist.probs[i];
    if (u < cdf) {
      pick = i;
      break;
    }
  }
  // Never land on a zero-probability tail entry through rounding.
  while (pick > 0 && dist.probs[pick] == 0.0) --pick;
  return {dist.support[pick], pick, dist.log_probs[pick]};
}

SampledAction sample_action(const ActionDistribution& dist, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample_action_at(dist, rng.uniform());
}

double state_value(const ValueParams& params, const LearnerState& state,
                   const LearnerProfile& profile) {
  const StateFeatureVector s = state_features(state, profile);
  return simd::dot(params.weights, s);
}

std::string plan_next(const PolicyParams& policy, const ValueParams& value,
                      const std::optional<PlanEnvironment>& env, const LearnerState& state,
                      const LearnerProfile& profile, const KnowledgeCorpus& corpus,
                      std::span<const std::string> candidates, double gamma) {
  if (candidates.empty()) throw InvalidArgument("plan_next: empty candidate set");
  std::vector<double> scores(candidates.size());
  if (env && env->learner != nullptr) {
    const RewardWeights defaults;
    const RewardWeights& weights = env->weights != nullptr ? *env->weights : defaults;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const StepResult r = step(*env->learner, corpus, candidates[i]);
      scores[i] = compute_reward(state, r.state, weights).total +
                  gamma * state_value(value, r.state, profile);
    }
  } else {
    scores = policy_logits(policy, feature_matrix(state, profile, corpus, candidates));
  }
  return argmax_id(candidates, scores);
}

nlohmann::json to_json(const Checkpoint& c) {
  return {{"version", kCheckpointVersion},
          {"feature_layout_hash", feature_layout_hash()},
          {"theta", c.policy.theta},
          {"temperature", c.policy.temperature},
          {"v_weights", c.value.weights}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError("checkpoint: unsupported version");
    }
    if (j.at("feature_layout_hash").get<std::string>() != feature_layout_hash()) {
      throw FormatError("checkpoint: feature layout hash mismatch");
    }
    Checkpoint c;
    c.policy.theta = j.at("theta").get<FeatureVector>();
    c.policy.temperature = j.at("temperature").get<double>();
    c.value.weights = j.at("v_weights").get<StateFeatureVector>();
    if (!(c.policy.temperature > 0.0)) throw FormatError("checkpoint: temperature must be > 0");
    for (double v : c.policy.theta) {
      if (!std::isfinite(v)) throw FormatError("checkpoint: non-finite theta");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace pxplore
