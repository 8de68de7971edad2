#pragma once
// Evaluation surfaces: per-dimension alignment/reward/component reports,
// P@1 and graded NDCG@k, and paired multi-seed policy comparison.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/episode.hpp"
#include "pxplore/policy.hpp"
#include "pxplore/reward.hpp"
#include "pxplore/sim.hpp"
#include "pxplore/state.hpp"

namespace pxplore {

// Rates are percentages. avg_rate is component-weighted (total aligned over
// total components); totals sum the four dimensions.
struct AlignmentReport {
  std::array<double, kDimensions> rate{};
  std::array<double, kDimensions> reward{};
  std::array<int, kDimensions> components{};
  std::array<int, kDimensions> aligned{};
  double avg_rate = 0.0;
  double total_reward = 0.0;
  int total_components = 0;
};

AlignmentReport alignment_report(std::span<const LearnerState> final_states,
                                 std::span<const RewardBreakdown> reward_logs);

struct RankingCase {
  std::vector<std::string> ranked;
  std::map<std::string, int> grades;  // 0, 1 or 2
};

// Fraction of cases whose first-ranked id has grade 2. Throws InvalidArgument
// unless every case has exactly one grade-2 id.
double precision_at_1(std::span<const RankingCase> cases);

// Graded NDCG with gain 2^g − 1 and discount log2(i + 1); 1.0 when IDCG = 0.
double ndcg_at_k(const RankingCase& c, int k);

// A policy picks an action id from an observation. `u` is a uniform draw in
// [0, 1) shared by every policy at the same (seed, learner, step).
struct NamedPolicy {
  std::string name;
  std::function<std::string(const Observation&, const SimLearner&, double u)> choose;
};

NamedPolicy uniform_random_policy();
NamedPolicy retrieval_only_policy();
enum class PolicyMode { kSample, kGreedy };
NamedPolicy learned_policy(std::string name, PolicyParams params, const KnowledgeCorpus& corpus,
                           PolicyMode mode = PolicyMode::kSample);

// Candidates ordered by policy logits (descending, ties by ascending id).
std::vector<std::string> rank_by_policy(const PolicyParams& params, const LearnerState& state,
                                        const LearnerProfile& profile,
                                        const KnowledgeCorpus& corpus,
                                        std::span<const std::string> candidates);

struct EpisodeOutcome {
  double discounted_return = 0.0;
  LearnerState final_state;
  std::vector<RewardBreakdown> rewards;
  std::vector<std::string> actions;
};

EpisodeOutcome run_episode(const NamedPolicy& policy, const SimLearner& learner,
                           const KnowledgeCorpus& corpus, const EnvConfig& env,
                           std::uint64_t seed, std::size_t learner_index);

struct ComparisonRow {
  std::string name;
  double mean_return = 0.0;  // mean over seeds of the per-seed mean return
  double std_return = 0.0;   // population std over seeds
  double final_alignment_rate = 0.0;  // percent, pooled over seeds
  std::vector<double> per_seed_return;
  AlignmentReport report;
};

using EnvFactory = std::function<std::vector<SimLearner>(std::uint64_t seed)>;

// Paired design: every policy sees the same learners and uniform draws for a
// seed. Seeds are evaluated concurrently and merged in seed order.
std::vector<ComparisonRow> compare_policies(std::span<const NamedPolicy> policies,
                                            const EnvFactory& env_factory,
                                            std::span<const std::uint64_t> seeds,
                                            const KnowledgeCorpus& corpus, const EnvConfig& env);

nlohmann::json to_json(const AlignmentReport& r);
// Long-format CSV with one column per dimension plus Avg and Total:
// policy,metric,O_L,O_S,M_I,M_E,Avg,Total
std::string alignment_csv(const std::vector<std::pair<std::string, AlignmentReport>>& reports);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace pxplore
