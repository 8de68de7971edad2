#pragma once
// End-to-end stages shared by the command-line tool and the benchmark.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pxplore/config.hpp"
#include "pxplore/corpus.hpp"
#include "pxplore/metrics.hpp"
#include "pxplore/policy.hpp"
#include "pxplore/sim.hpp"

namespace pxplore {

inline constexpr int kNdcgCutoffs[] = {1, 3, 5, 7, 10};

// Training population and its expert dataset, both from the data seed.
struct DataBundle {
  std::vector<SimLearner> population;
  std::vector<ExpertRecord> records;
  DatasetStats stats;
};

DataBundle build_data(const RunConfig& config, const KnowledgeCorpus& corpus, std::uint64_t seed);

std::vector<ExpertRecord> split_records(std::span<const ExpertRecord> records, const std::string& split);

struct TrainedPolicies {
  PolicyParams sft;
  PolicyParams grpo;
  ValueParams value;
  std::vector<double> sft_loss;
  std::vector<EpochLog> grpo_logs;
};

TrainedPolicies train_both(const RunConfig& config, const KnowledgeCorpus& corpus,
                           const DataBundle& data, std::uint64_t seed);

// Fresh evaluation learners for one seed, disjoint from the training stream.
std::vector<SimLearner> eval_population(const RunConfig& config, const KnowledgeCorpus& corpus,
                                        std::uint64_t seed);

std::vector<ComparisonRow> run_benchmark(const RunConfig& config, const KnowledgeCorpus& corpus,
                                         const PolicyParams& sft, const PolicyParams& grpo,
                                         std::span<const std::uint64_t> seeds);

struct RankingScores {
  double p_at_1 = 0.0;
  std::map<int, double> ndcg;  // cutoff -> mean NDCG
  std::size_t cases = 0;
};

// Zero scores for every cutoff when there are no cases.
RankingScores score_cases(std::span<const RankingCase> cases);
RankingScores ranking_scores(const PolicyParams& params, std::span<const ExpertRecord> records,
                             const KnowledgeCorpus& corpus);

}  // namespace pxplore
