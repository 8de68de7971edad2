#include "pxplore/training.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pxplore/error.hpp"
#include "pxplore/rng.hpp"
#include "pxplore/simd.hpp"

namespace pxplore {

namespace {

constexpr double kRidgeLambda = 1e-6;
constexpr double kMaxLogRatio = 700.0;

// Expected feature vector under the policy for one decision, plus probs.
struct PolicyView {
  std::vector<double> probs;
  std::vector<double> log_probs;
  FeatureVector mean_features{};
};

PolicyView view(const PolicyParams& params, const Decision& d) {
  PolicyView v;
  softmax(policy_logits(params, d.features), v.probs, v.log_probs);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    simd::axpy(v.probs[r], std::span<const double>(d.features).subspan(r * kFeatureDim, kFeatureDim),
               v.mean_features);
  }
  return v;
}

std::span<const double> row(const Decision& d, std::size_t r) {
  return std::span<const double>(d.features).subspan(r * kFeatureDim, kFeatureDim);
}

double norm(const FeatureVector& g) { return std::sqrt(simd::sum_squares(g)); }

bool finite(const FeatureVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Decision decision_from_record(const ExpertRecord& record, const LearnerProfile& profile,
                              const KnowledgeCorpus& corpus) {
  auto it = std::find(record.candidates.begin(), record.candidates.end(), record.best);
  if (it == record.candidates.end()) {
    throw InvalidArgument("expert action " + record.best + " absent from candidates of " +
                          record.learner_id);
  }
  Decision d;
  d.features = feature_matrix(record.state, profile, corpus, record.candidates);
  d.chosen = static_cast<std::size_t>(it - record.candidates.begin());
  return d;
}

LossAndGrad sft_loss_and_grad(const PolicyParams& params, std::span<const Decision> batch) {
  if (batch.empty()) throw InvalidArgument("sft_loss_and_grad: empty batch");
  LossAndGrad out;
  for (const Decision& d : batch) {
    const PolicyView v = view(params, d);
    out.value -= v.log_probs[d.chosen];
    // ∂(−ln π_k)/∂θ = (E_π[f] − f_k) / τ
    simd::axpy(1.0, v.mean_features, out.grad);
    simd::axpy(-1.0, row(d, d.chosen), out.grad);
  }
  const double n = static_cast<double>(batch.size());
  out.value /= n;
  for (double& g : out.grad) g /= n * params.temperature;
  return out;
}

LossAndGrad sft_loss_and_grad(const PolicyParams& params, std::span<const ExpertRecord> batch,
                              const KnowledgeCorpus& corpus, const ProfileFn& profile_fn) {
  std::vector<Decision> decisions;
  decisions.reserve(batch.size());
  for (const auto& r : batch) {
    decisions.push_back(decision_from_record(r, profile_fn ? profile_fn(r) : r.profile, corpus));
  }
  return sft_loss_and_grad(params, decisions);
}

SftResult train_sft(const PolicyParams& params0, std::span<const ExpertRecord> dataset,
                    const KnowledgeCorpus& corpus, const SftConfig& config, std::uint64_t seed,
                    const ProfileFn& profile_fn) {
  if (dataset.empty()) throw InvalidArgument("train_sft: empty dataset");
  if (config.batch_size < 1 || config.epochs < 0 || config.learning_rate < 0.0) {
    throw InvalidArgument("train_sft: invalid config");
  }
  std::vector<Decision> decisions;
  decisions.reserve(dataset.size());
  for (const auto& r : dataset) {
    if (r.split != "train") {
      throw InvalidArgument("train_sft: record " + r.learner_id + " is not in the train split");
    }
    decisions.push_back(decision_from_record(r, profile_fn ? profile_fn(r) : r.profile, corpus));
  }

  SftResult result;
  result.params = params0;
  result.loss_curve.push_back(sft_loss_and_grad(result.params, decisions).value);

  std::vector<std::size_t> order(decisions.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<Decision> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng = Rng::derive({seed, 0x5f7ULL, static_cast<std::uint64_t>(epoch)});
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) {
        batch.push_back(decisions[order[i]]);
      }
      const LossAndGrad lg = sft_loss_and_grad(result.params, batch);
      if (!std::isfinite(lg.value) || !finite(lg.grad)) {
        throw Divergence("train_sft: non-finite loss at epoch " + std::to_string(epoch) +
                         " (batch loss " + std::to_string(lg.value) + ")");
      }
      simd::axpy(-config.learning_rate, lg.grad, result.params.theta);
    }
    const double loss = sft_loss_and_grad(result.params, decisions).value;
    if (!std::isfinite(loss)) {
      throw Divergence("train_sft: non-finite loss after epoch " + std::to_string(epoch));
    }
    result.loss_curve.push_back(loss);
  }
  return result;
}

Group sample_group(const PolicyParams& params_old, const ValueParams& value,
                   std::span<const SimLearner> envs, const KnowledgeCorpus& corpus,
                   const EnvConfig& env, const GrpoConfig& config, std::uint64_t seed) {
  Group group;
  group.reserve(envs.size());
  for (std::size_t g = 0; g < envs.size(); ++g) {
    Rng rng = Rng::derive({seed, 0x6a0ULL, g});
    SimLearner learner = envs[g];
    Trajectory traj;
    for (int t = 0; t < config.horizon; ++t) {
      const Observation obs = observe(learner, corpus, env);
      if (obs.candidates.empty()) break;
      TrajectoryStep s;
      s.state = learner.state;
      s.profile = obs.profile;
      s.candidates = obs.candidates.ids();
      s.decision.features = feature_matrix(s.state, s.profile, corpus, s.candidates);
      std::vector<double> probs;
      std::vector<double> log_probs;
      softmax(policy_logits(params_old, s.decision.features), probs, log_probs);
      const ActionDistribution dist{s.candidates, std::move(probs), std::move(log_probs)};
      const SampledAction a = sample_action_at(dist, rng.uniform());
      s.chosen = a.id;
      s.chosen_index = a.index;
      s.decision.chosen = a.index;
      s.log_prob_old = a.log_prob;
      Transition tr = transition(learner, corpus, a.id, env);
      s.reward = tr.reward.total;
      s.next_state = tr.learner.state;
      s.state_features = state_features(s.state, s.profile);
      s.next_state_features = state_features(s.next_state, s.profile);
      learner = std::move(tr.learner);
      traj.push_back(std::move(s));
    }
    if (!traj.empty()) traj.back().terminal = true;
    group.push_back(std::move(traj));
  }
  refresh_values(group, value);
  return group;
}

void refresh_values(Group& group, const ValueParams& value) {
  for (auto& traj : group) {
    for (auto& s : traj) {
      s.value_s = simd::dot(value.weights, s.state_features);
      s.value_s_next = s.terminal ? 0.0 : simd::dot(value.weights, s.next_state_features);
    }
  }
}

GroupAdvantages grpo_advantages(const Group& group, double gamma, double epsilon) {
  GroupAdvantages adv(group.size());
  std::vector<double> flat;
  for (std::size_t g = 0; g < group.size(); ++g) {
    for (const auto& s : group[g]) {
      const double a = s.reward + gamma * s.value_s_next - s.value_s;
      adv[g].push_back(a);
      flat.push_back(a);
    }
  }
  if (flat.empty()) return adv;
  const double n = static_cast<double>(flat.size());
  const double mean = std::accumulate(flat.begin(), flat.end(), 0.0) / n;
  double var = 0.0;
  for (double a : flat) var += (a - mean) * (a - mean);
  const double sigma = std::sqrt(var / n);
  for (auto& traj : adv) {
    for (double& a : traj) a = (a - mean) / (sigma + epsilon);
  }
  return adv;
}

LossAndGrad grpo_objective(const PolicyParams& params, std::span<const Group> groups,
                           std::span<const GroupAdvantages> advantages,
                           std::optional<double> clip_ratio) {
  if (groups.size() != advantages.size()) {
    throw InvalidArgument("grpo_objective: advantages not aligned with groups");
  }
  LossAndGrad out;
  std::size_t count = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& group = groups[gi];
    if (group.size() != advantages[gi].size()) {
      throw InvalidArgument("grpo_objective: advantages not aligned with trajectories");
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      if (group[g].size() != advantages[gi][g].size()) {
        throw InvalidArgument("grpo_objective: advantages not aligned with steps");
      }
      for (std::size_t t = 0; t < group[g].size(); ++t) {
        const TrajectoryStep& s = group[g][t];
        const double adv = advantages[gi][g][t];
        const PolicyView v = view(params, s.decision);
        const double log_ratio =
            std::min(v.log_probs[s.decision.chosen] - s.log_prob_old, kMaxLogRatio);
        double ratio = std::exp(log_ratio);
        bool clipped = false;
        if (clip_ratio) {
          const double lo = 1.0 - *clip_ratio;
          const double hi = 1.0 + *clip_ratio;
          if (ratio < lo || ratio > hi) {
            ratio = std::clamp(ratio, lo, hi);
            clipped = true;
          }
        }
        out.value += ratio * adv;
        ++count;
        if (clipped || adv == 0.0) continue;
        // ∇ ratio = ratio · (f_k − E_π[f]) / τ
        const double scale = ratio * adv / params.temperature;
        simd::axpy(scale, row(s.decision, s.decision.chosen), out.grad);
        simd::axpy(-scale, v.mean_features, out.grad);
      }
    }
  }
  if (count == 0) return out;
  const double n = static_cast<double>(count);
  out.value /= n;
  for (double& g : out.grad) g /= n;
  return out;
}

PolicyParams grpo_step(const PolicyParams& params, std::span<const Group> groups,
                       std::span<const GroupAdvantages> advantages, const GrpoConfig& config) {
  const LossAndGrad lg = grpo_objective(params, groups, advantages, config.clip_ratio);
  PolicyParams next = params;
  simd::axpy(config.learning_rate, lg.grad, next.theta);
  return next;
}

std::vector<double> returns_to_go(const Trajectory& t, double gamma) {
  std::vector<double> out(t.size());
  double acc = 0.0;
  for (std::size_t i = t.size(); i-- > 0;) {
    acc = t[i].reward + gamma * acc;
    out[i] = acc;
  }
  return out;
}

ValueParams fit_value_samples(std::span<const StateFeatureVector> features,
                              std::span<const double> targets) {
  if (features.empty() || features.size() != targets.size()) {
    throw InvalidArgument("fit_value: need matching, non-empty features and targets");
  }
  constexpr int d = static_cast<int>(kStateFeatureDim);
  Eigen::Matrix<double, d, d> gram = Eigen::Matrix<double, d, d>::Zero();
  Eigen::Matrix<double, d, 1> rhs = Eigen::Matrix<double, d, 1>::Zero();
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Eigen::Map<const Eigen::Matrix<double, d, 1>> x(features[i].data());
    gram.noalias() += x * x.transpose();
    rhs.noalias() += targets[i] * x;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, d, d>> lu(gram);
  Eigen::Matrix<double, d, 1> w;
  if (lu.rank() == d) {
    w = lu.solve(rhs);
  } else {
    const Eigen::Matrix<double, d, d> ridge =
        gram + kRidgeLambda * Eigen::Matrix<double, d, d>::Identity();
    w = ridge.ldlt().solve(rhs);
  }
  ValueParams out;
  for (int i = 0; i < d; ++i) out.weights[static_cast<std::size_t>(i)] = w(i);
  return out;
}

ValueParams fit_value(std::span<const Trajectory> trajectories, double gamma) {
  std::vector<StateFeatureVector> features;
  std::vector<double> targets;
  for (const auto& t : trajectories) {
    const auto g = returns_to_go(t, gamma);
    for (std::size_t i = 0; i < t.size(); ++i) {
      features.push_back(t[i].state_features);
      targets.push_back(g[i]);
    }
  }
  if (features.empty()) throw InvalidArgument("fit_value: no trajectory steps");
  return fit_value_samples(features, targets);
}

nlohmann::json to_json(const EpochLog& log) {
  return {{"epoch", log.epoch},
          {"mean_return", log.mean_return},
          {"loss", log.loss},
          {"grad_norm", log.grad_norm},
          {"seed", log.seed}};
}

GrpoResult train_grpo(const PolicyParams& params_sft, std::span<const SimLearner> population,
                      const KnowledgeCorpus& corpus, const EnvConfig& env,
                      const GrpoConfig& config, std::uint64_t seed,
                      const std::function<void(const EpochLog&)>& on_epoch) {
  if (!finite(params_sft.theta)) throw InvalidArgument("train_grpo: non-finite initial params");
  if (population.empty()) throw InvalidArgument("train_grpo: empty population");
  if (config.group_size < 2) throw InvalidArgument("train_grpo: group size must be >= 2");
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
    throw InvalidArgument("train_grpo: gamma outside [0,1]");
  }
  if (config.learning_rate < 0.0) throw InvalidArgument("train_grpo: negative learning rate");

  EnvConfig episode_env = env;
  episode_env.gamma = config.gamma;
  GrpoResult result;
  result.params = params_sft;
  const int groups_per_epoch = std::max(1, config.groups_per_epoch);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::uint64_t epoch_seed = mix_seed({seed, static_cast<std::uint64_t>(epoch)});
    Rng pick = Rng::derive({epoch_seed, 0x91c4ULL});
    std::vector<Group> groups;
    groups.reserve(static_cast<std::size_t>(groups_per_epoch));
    for (int b = 0; b < groups_per_epoch; ++b) {
      const auto idx = static_cast<std::size_t>(
          pick.uniform_int(0, static_cast<std::int64_t>(population.size()) - 1));
      const std::vector<SimLearner> envs(static_cast<std::size_t>(config.group_size),
                                         population[idx]);
      groups.push_back(sample_group(result.params, result.value, envs, corpus, episode_env,
                                    config, mix_seed({epoch_seed, static_cast<std::uint64_t>(b)})));
    }

    std::vector<Trajectory> all;
    double return_sum = 0.0;
    for (const auto& g : groups) {
      for (const auto& t : g) {
        if (t.empty()) continue;
        all.push_back(t);
        return_sum += returns_to_go(t, config.gamma).front();
      }
    }
    EpochLog log;
    log.epoch = epoch;
    log.seed = epoch_seed;
    log.mean_return = all.empty() ? 0.0 : return_sum / static_cast<double>(all.size());
    if (!std::isfinite(log.mean_return)) {
      result.diverged = true;
      result.message = "train_grpo: non-finite mean return at epoch " + std::to_string(epoch);
      return result;
    }
    if (all.empty()) {
      result.logs.push_back(log);
      if (on_epoch) on_epoch(log);
      continue;
    }

    result.value = fit_value(all, config.gamma);
    std::vector<GroupAdvantages> advantages;
    for (auto& g : groups) {
      refresh_values(g, result.value);
      advantages.push_back(grpo_advantages(g, config.gamma, config.epsilon));
    }
    const LossAndGrad lg = grpo_objective(result.params, groups, advantages, config.clip_ratio);
    PolicyParams next = result.params;
    simd::axpy(config.learning_rate, lg.grad, next.theta);
    if (!finite(next.theta) || !std::isfinite(lg.value)) {
      result.diverged = true;
      result.message = "train_grpo: non-finite update at epoch " + std::to_string(epoch);
      return result;
    }
    result.params = next;
    ++result.updates;
    log.loss = -lg.value;
    log.grad_norm = norm(lg.grad);
    result.logs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return result;
}

double grad_check(const std::function<double(std::span<const double>)>& objective,
                  std::span<const double> analytic_grad, std::span<const double> params,
                  double step) {
  std::vector<double> x(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + step;
    const double up = objective(x);
    x[i] = orig - step;
    const double down = objective(x);
    x[i] = orig;
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic_grad[i];
    const double err =
        std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace pxplore
