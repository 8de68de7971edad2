#pragma once
// Two-stage policy optimization: behavioral cloning on expert records, then
// group-relative policy optimization against the simulated learner.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/episode.hpp"
#include "pxplore/policy.hpp"
#include "pxplore/sim.hpp"

namespace pxplore {

struct SftConfig {
  double learning_rate = 0.05;
  int epochs = 50;
  int batch_size = 32;
};

struct GrpoConfig {
  double learning_rate = 0.01;
  int epochs = 30;
  int group_size = 8;         // G trajectories per group
  int horizon = 5;            // T
  double gamma = 0.9;
  double epsilon = 1e-8;
  std::optional<double> clip_ratio;  // symmetric ratio clip; off by default
  int groups_per_epoch = 16;  // learners sampled per update
};

struct TrainConfig {
  SftConfig sft;
  GrpoConfig grpo;
};

// A featurized choice among candidates: the shared unit of both losses.
struct Decision {
  std::vector<double> features;  // rows x kFeatureDim
  std::size_t chosen = 0;

  std::size_t rows() const { return features.size() / kFeatureDim; }
};

struct LossAndGrad {
  double value = 0.0;
  FeatureVector grad{};
};

using ProfileFn = std::function<LearnerProfile(const ExpertRecord&)>;

// Throws InvalidArgument when the expert action is missing from candidates.
Decision decision_from_record(const ExpertRecord& record, const LearnerProfile& profile,
                              const KnowledgeCorpus& corpus);

// −mean ln π_θ(k*|s) and its exact gradient.
LossAndGrad sft_loss_and_grad(const PolicyParams& params, std::span<const Decision> batch);
LossAndGrad sft_loss_and_grad(const PolicyParams& params, std::span<const ExpertRecord> batch,
                              const KnowledgeCorpus& corpus, const ProfileFn& profile_fn = {});

struct SftResult {
  PolicyParams params;
  std::vector<double> loss_curve;  // full-dataset loss before training and after each epoch
};

// Mini-batch gradient descent. Every record must be tagged "train". Throws
// Divergence on a non-finite loss.
SftResult train_sft(const PolicyParams& params0, std::span<const ExpertRecord> dataset,
                    const KnowledgeCorpus& corpus, const SftConfig& config, std::uint64_t seed,
                    const ProfileFn& profile_fn = {});

struct TrajectoryStep {
  LearnerState state;
  LearnerState next_state;
  LearnerProfile profile;
  std::vector<std::string> candidates;
  std::string chosen;
  std::size_t chosen_index = 0;
  double log_prob_old = 0.0;
  double reward = 0.0;
  double value_s = 0.0;
  double value_s_next = 0.0;
  Decision decision;
  StateFeatureVector state_features{};
  StateFeatureVector next_state_features{};
  bool terminal = false;  // last recorded step of its trajectory
};

using Trajectory = std::vector<TrajectoryStep>;
using Group = std::vector<Trajectory>;
using GroupAdvantages = std::vector<std::vector<double>>;

// One trajectory of up to `horizon` steps per env; trajectory g samples
// actions from a stream derived from (seed, g). A step with no candidates
// ends the trajectory.
Group sample_group(const PolicyParams& params_old, const ValueParams& value,
                   std::span<const SimLearner> envs, const KnowledgeCorpus& corpus,
                   const EnvConfig& env, const GrpoConfig& config, std::uint64_t seed);

// A_t = R_t + γ V(s_{t+1}) − V(s_t); normalized by the mean and population
// standard deviation over every step in the group.
GroupAdvantages grpo_advantages(const Group& group, double gamma, double epsilon);

// J = mean over steps of ratio_t · Â_t, with its analytic gradient.
LossAndGrad grpo_objective(const PolicyParams& params, std::span<const Group> groups,
                           std::span<const GroupAdvantages> advantages,
                           std::optional<double> clip_ratio);

// One ascent step on J.
PolicyParams grpo_step(const PolicyParams& params, std::span<const Group> groups,
                       std::span<const GroupAdvantages> advantages, const GrpoConfig& config);

// Discounted return-to-go for every step of a trajectory.
std::vector<double> returns_to_go(const Trajectory& t, double gamma);

// Least squares of targets onto state features; ridge (λ = 1e-6) when the
// normal equations are singular.
ValueParams fit_value_samples(std::span<const StateFeatureVector> features,
                              std::span<const double> targets);
ValueParams fit_value(std::span<const Trajectory> trajectories, double gamma);

// Recomputes value_s / value_s_next for every step (terminal next value = 0).
void refresh_values(Group& group, const ValueParams& value);

struct EpochLog {
  int epoch = 0;
  double mean_return = 0.0;
  double loss = 0.0;
  double grad_norm = 0.0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const EpochLog& log);

struct GrpoResult {
  PolicyParams params;
  ValueParams value;
  std::vector<EpochLog> logs;
  int updates = 0;
  bool diverged = false;
  std::string message;
};

GrpoResult train_grpo(const PolicyParams& params_sft, std::span<const SimLearner> population,
                      const KnowledgeCorpus& corpus, const EnvConfig& env,
                      const GrpoConfig& config, std::uint64_t seed,
                      const std::function<void(const EpochLog&)>& on_epoch = {});

// Max over coordinates of |g_a − g_n| / max(1, |g_a|, |g_n|) with central
// differences of the given step.
double grad_check(const std::function<double(std::span<const double>)>& objective,
                  std::span<const double> analytic_grad, std::span<const double> params,
                  double step);

}  // namespace pxplore
