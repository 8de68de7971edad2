#pragma once
// Featurized linear-softmax policy over candidate actions, a linear state
// value baseline, and the next-action planning rule.
//
// Feature layout v1 (kFeatureDim = 16):
//   0..3   unaligned component count per dimension (O_L, O_S, M_I, M_E)
//   4..7   mean confidence of unaligned components per dimension (0 if none)
//   8      Jaccard(action keywords, tokens of unaligned component
//          descriptions ∪ profile interest)
//   9      |Bloom(action) − profile cognition|
//   10..13 persona one-hot (Momentum, Consolidator, Explorer, Struggler)
//   14     profile engagement
//   15     bias (1.0)
// The value baseline reads features 0..7 plus the bias.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/corpus.hpp"
#include "pxplore/profiler.hpp"
#include "pxplore/state.hpp"

namespace pxplore {

struct SimLearner;
struct RewardWeights;

inline constexpr std::size_t kFeatureDim = 16;
inline constexpr std::size_t kStateFeatureDim = 9;
inline constexpr std::size_t kJaccardFeature = 8;
inline constexpr std::size_t kBloomFeature = 9;
inline constexpr std::size_t kBiasFeature = 15;

using FeatureVector = std::array<double, kFeatureDim>;
using StateFeatureVector = std::array<double, kStateFeatureDim>;

// Stable identifier of the layout above, stored in checkpoints.
std::string feature_layout_hash();

struct PolicyParams {
  FeatureVector theta{};
  double temperature = 0.5;
};

struct ValueParams {
  StateFeatureVector weights{};
};

struct ActionDistribution {
  std::vector<std::string> support;  // candidate order
  std::vector<double> probs;
  std::vector<double> log_probs;
};

// Per-state context reused across candidates when featurizing.
struct FeatureContext {
  std::array<double, 8> state_block{};
  TokenSet goal_tokens;  // unaligned description tokens ∪ interest tokens
  std::array<double, 6> profile_block{};  // persona one-hot, engagement, bias
  Bloom cognition = Bloom::kUnderstanding;
};

FeatureContext feature_context(const LearnerState& state, const LearnerProfile& profile);
FeatureVector featurize(const FeatureContext& ctx, const LearningAction& action);
FeatureVector featurize(const LearnerState& state, const LearnerProfile& profile,
                        const LearningAction& action);
StateFeatureVector state_features(const LearnerState& state, const LearnerProfile& profile);

// Row-major |candidates| x kFeatureDim matrix.
std::vector<double> feature_matrix(const LearnerState& state, const LearnerProfile& profile,
                                   const KnowledgeCorpus& corpus,
                                   std::span<const std::string> candidates);

// logits_i = θ·f_i / temperature over a feature matrix.
std::vector<double> policy_logits(const PolicyParams& params, std::span<const double> features);
// Max-subtracted softmax; writes probabilities and log-probabilities.
void softmax(std::span<const double> logits, std::vector<double>& probs,
             std::vector<double>& log_probs);

// Throws InvalidArgument for an empty candidate list or temperature <= 0.
ActionDistribution action_distribution(const PolicyParams& params, const LearnerState& state,
                                       const LearnerProfile& profile,
                                       const KnowledgeCorpus& corpus,
                                       std::span<const std::string> candidates);

struct SampledAction {
  std::string id;
  std::size_t index = 0;
  double log_prob = 0.0;
};

// Inverse-CDF draw in support order using the uniform `u` in [0, 1).
SampledAction sample_action_at(const ActionDistribution& dist, double u);
SampledAction sample_action(const ActionDistribution& dist, std::uint64_t rng_seed);

double state_value(const ValueParams& params, const LearnerState& state,
                   const LearnerProfile& profile);

struct PlanEnvironment {
  const SimLearner* learner = nullptr;  // state must equal the planning state
  const RewardWeights* weights = nullptr;
};

// Evaluation mode (env set): argmax over candidates of one simulated step's
// reward + γ·V(next). Deployment mode: argmax of policy logits. Ties go to the
// lower action id.
std::string plan_next(const PolicyParams& policy, const ValueParams& value,
                      const std::optional<PlanEnvironment>& env, const LearnerState& state,
                      const LearnerProfile& profile, const KnowledgeCorpus& corpus,
                      std::span<const std::string> candidates, double gamma);

struct Checkpoint {
  PolicyParams policy;
  ValueParams value;
};

nlohmann::json to_json(const Checkpoint& c);
// Throws FormatError on a layout-hash mismatch or malformed content.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

}  // namespace pxplore
