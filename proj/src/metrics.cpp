#include "pxplore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>

#include "pxplore/error.hpp"
#include "pxplore/rng.hpp"

namespace pxplore {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int grade_of(const RankingCase& c, const std::string& id) {
  auto it = c.grades.find(id);
  if (it == c.grades.end()) throw InvalidArgument("ranking case: ranked id " + id + " has no grade");
  return it->second;
}

}  // namespace

AlignmentReport alignment_report(std::span<const LearnerState> final_states,
                                 std::span<const RewardBreakdown> reward_logs) {
  AlignmentReport r;
  for (const auto& s : final_states) {
    for (const auto& [id, c] : s.components()) {
      const auto d = static_cast<std::size_t>(c.dimension);
      r.components[d] += 1;
      if (c.aligned()) r.aligned[d] += 1;
    }
  }
  for (const auto& log : reward_logs) {
    for (Dimension d : kAllDimensions) r.reward[static_cast<std::size_t>(d)] += log.dimension_total(d);
  }
  int aligned_total = 0;
  for (std::size_t d = 0; d < kDimensions; ++d) {
    r.rate[d] = r.components[d] == 0 ? 0.0 : 100.0 * r.aligned[d] / r.components[d];
    r.total_components += r.components[d];
    r.total_reward += r.reward[d];
    aligned_total += r.aligned[d];
  }
  r.avg_rate = r.total_components == 0 ? 0.0 : 100.0 * aligned_total / r.total_components;
  return r;
}

double precision_at_1(std::span<const RankingCase> cases) {
  if (cases.empty()) return 0.0;
  int hits = 0;
  for (const auto& c : cases) {
    const auto best = std::count_if(c.grades.begin(), c.grades.end(),
                                    [](const auto& kv) { return kv.second == 2; });
    if (best != 1) {
      throw InvalidArgument("precision_at_1: case must have exactly one grade-2 action, found " +
                            std::to_string(best));
    }
    if (!c.ranked.empty() && grade_of(c, c.ranked.front()) == 2) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cases.size());
}

double ndcg_at_k(const RankingCase& c, int k) {
  if (k < 1) throw InvalidArgument("ndcg_at_k: k must be >= 1");
  const auto cutoff = static_cast<std::size_t>(k);
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(cutoff, c.ranked.size()); ++i) {
    dcg += (std::exp2(grade_of(c, c.ranked[i])) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& id : c.ranked) ideal.push_back(grade_of(c, id));
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(cutoff, ideal.size()); ++i) {
    idcg += (std::exp2(ideal[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  if (idcg == 0.0) return 1.0;
  return std::min(1.0, dcg / idcg);
}

NamedPolicy uniform_random_policy() {
  return {"uniform-random", [](const Observation& obs, const SimLearner&, double u) {
            const auto n = obs.candidates.size();
            const auto i = std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
            return obs.candidates.ranked[i].id;
          }};
}

NamedPolicy retrieval_only_policy() {
  return {"retrieval-only", [](const Observation& obs, const SimLearner&, double) {
            return obs.candidates.ranked.front().id;
          }};
}

NamedPolicy learned_policy(std::string name, PolicyParams params, const KnowledgeCorpus& corpus,
                           PolicyMode mode) {
  return {std::move(name),
          [params, &corpus, mode](const Observation& obs, const SimLearner& learner, double u) {
            const auto ids = obs.candidates.ids();
            if (mode == PolicyMode::kGreedy) {
              return plan_next(params, ValueParams{}, std::nullopt, learner.state, obs.profile,
                               corpus, ids, 0.0);
            }
            const ActionDistribution dist =
                action_distribution(params, learner.state, obs.profile, corpus, ids);
            return sample_action_at(dist, u).id;
          }};
}

std::vector<std::string> rank_by_policy(const PolicyParams& params, const LearnerState& state,
                                        const LearnerProfile& profile,
                                        const KnowledgeCorpus& corpus,
                                        std::span<const std::string> candidates) {
  const auto logits = policy_logits(params, feature_matrix(state, profile, corpus, candidates));
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (logits[a] != logits[b]) return logits[a] > logits[b];
    return candidates[a] < candidates[b];
  });
  std::vector<std::string> out;
  for (std::size_t i : order) out.push_back(candidates[i]);
  return out;
}

EpisodeOutcome run_episode(const NamedPolicy& policy, const SimLearner& learner,
                           const KnowledgeCorpus& corpus, const EnvConfig& env,
                           std::uint64_t seed, std::size_t learner_index) {
  EpisodeOutcome out;
  SimLearner current = learner;
  double discount = 1.0;
  for (int t = 0; t < env.horizon; ++t) {
    const Observation obs = observe(current, corpus, env);
    if (obs.candidates.empty()) break;
    const double u = Rng::derive({seed, 0xe7a1ULL, learner_index, static_cast<std::uint64_t>(t)})
                         .uniform();
    const std::string action = policy.choose(obs, current, u);
    Transition tr = transition(current, corpus, action, env);
    out.discounted_return += discount * tr.reward.total;
    discount *= env.gamma;
    out.rewards.push_back(std::move(tr.reward));
    out.actions.push_back(action);
    current = std::move(tr.learner);
  }
  out.final_state = current.state;
  return out;
}

std::vector<ComparisonRow> compare_policies(std::span<const NamedPolicy> policies,
                                            const EnvFactory& env_factory,
                                            std::span<const std::uint64_t> seeds,
                                            const KnowledgeCorpus& corpus, const EnvConfig& env) {
  if (policies.size() < 2) throw InvalidArgument("compare_policies: need at least two policies");
  if (seeds.empty()) throw InvalidArgument("compare_policies: empty seed list");

  struct SeedResult {
    std::vector<double> mean_return;  // per policy
    std::vector<std::vector<LearnerState>> finals;
    std::vector<std::vector<RewardBreakdown>> rewards;
  };
  auto run_seed = [&](std::uint64_t seed) {
    const std::vector<SimLearner> learners = env_factory(seed);
    SeedResult r;
    r.mean_return.assign(policies.size(), 0.0);
    r.finals.resize(policies.size());
    r.rewards.resize(policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
      double sum = 0.0;
      for (std::size_t i = 0; i < learners.size(); ++i) {
        EpisodeOutcome o = run_episode(policies[p], learners[i], corpus, env, seed, i);
        sum += o.discounted_return;
        r.finals[p].push_back(std::move(o.final_state));
        for (auto& rb : o.rewards) r.rewards[p].push_back(std::move(rb));
      }
      r.mean_return[p] = learners.empty() ? 0.0 : sum / static_cast<double>(learners.size());
    }
    return r;
  };

  std::vector<std::future<SeedResult>> futures;
  futures.reserve(seeds.size());
  for (std::uint64_t seed : seeds) futures.push_back(std::async(std::launch::async, run_seed, seed));

  std::vector<ComparisonRow> rows(policies.size());
  std::vector<std::vector<LearnerState>> finals(policies.size());
  std::vector<std::vector<RewardBreakdown>> rewards(policies.size());
  for (auto& f : futures) {
    SeedResult r = f.get();
    for (std::size_t p = 0; p < policies.size(); ++p) {
      rows[p].per_seed_return.push_back(r.mean_return[p]);
      std::move(r.finals[p].begin(), r.finals[p].end(), std::back_inserter(finals[p]));
      std::move(r.rewards[p].begin(), r.rewards[p].end(), std::back_inserter(rewards[p]));
    }
  }
  for (std::size_t p = 0; p < policies.size(); ++p) {
    ComparisonRow& row = rows[p];
    row.name = policies[p].name;
    const double n = static_cast<double>(row.per_seed_return.size());
    row.mean_return = std::accumulate(row.per_seed_return.begin(), row.per_seed_return.end(), 0.0) / n;
    double var = 0.0;
    for (double v : row.per_seed_return) var += (v - row.mean_return) * (v - row.mean_return);
    row.std_return = std::sqrt(var / n);
    row.report = alignment_report(finals[p], rewards[p]);
    row.final_alignment_rate = row.report.avg_rate;
  }
  return rows;
}

nlohmann::json to_json(const AlignmentReport& r) {
  nlohmann::json j;
  for (Dimension d : kAllDimensions) {
    const auto i = static_cast<std::size_t>(d);
    j[std::string(dimension_code(d))] = {{"alignment_rate", r.rate[i]},
                                         {"reward", r.reward[i]},
                                         {"components", r.components[i]},
                                         {"aligned", r.aligned[i]}};
  }
  j["Avg"] = {{"alignment_rate", r.avg_rate}};
  j["Total"] = {{"reward", r.total_reward}, {"components", r.total_components}};
  return j;
}

std::string alignment_csv(const std::vector<std::pair<std::string, AlignmentReport>>& reports) {
  std::string out = "policy,metric,O_L,O_S,M_I,M_E,Avg,Total\n";
  for (const auto& [name, r] : reports) {
    out += name + ",alignment_rate";
    for (double v : r.rate) out += "," + fmt(v);
    out += "," + fmt(r.avg_rate) + ",\n";
    out += name + ",reward";
    for (double v : r.reward) out += "," + fmt(v);
    out += ",," + fmt(r.total_reward) + "\n";
    out += name + ",components";
    for (int v : r.components) out += "," + std::to_string(v);
    out += ",," + std::to_string(r.total_components) + "\n";
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "policy,mean_return,std_return,final_alignment_rate\n";
  for (const auto& r : rows) {
    out += r.name + "," + fmt(r.mean_return) + "," + fmt(r.std_return) + "," +
           fmt(r.final_alignment_rate) + "\n";
  }
  return out;
}

}  // namespace pxplore
