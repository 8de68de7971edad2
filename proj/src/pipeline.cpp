#include "pxplore/pipeline.hpp"

#include "pxplore/rng.hpp"

namespace pxplore {

DataBundle build_data(const RunConfig& config, const KnowledgeCorpus& corpus, std::uint64_t seed) {
  DataBundle d;
  d.population = spawn_population(config.population, config.population_size, mix_seed({seed, 0x90}), corpus);
  d.records = generate_expert_dataset(d.population, corpus, config.expert_config(), mix_seed({seed, 0x91}));
  d.stats = dataset_stats(d.records, d.population);
  return d;
}

std::vector<ExpertRecord> split_records(std::span<const ExpertRecord> records, const std::string& split) {
  std::vector<ExpertRecord> out;
  for (const auto& r : records) {
    if (r.split == split) out.push_back(r);
  }
  return out;
}

TrainedPolicies train_both(const RunConfig& config, const KnowledgeCorpus& corpus,
                           const DataBundle& data, std::uint64_t seed) {
  TrainedPolicies t;
  const auto train = split_records(data.records, "train");
  SftResult sft = train_sft(PolicyParams{}, train, corpus, config.train.sft, mix_seed({seed, 0x51}));
  t.sft = sft.params;
  t.sft_loss = std::move(sft.loss_curve);
  GrpoResult grpo = train_grpo(t.sft, data.population, corpus, config.env, config.train.grpo,
                               mix_seed({seed, 0x52}));
  t.grpo = grpo.params;
  t.value = grpo.value;
  t.grpo_logs = std::move(grpo.logs);
  return t;
}

std::vector<SimLearner> eval_population(const RunConfig& config, const KnowledgeCorpus& corpus,
                                        std::uint64_t seed) {
  return spawn_population(config.population, config.eval_population_size, mix_seed({seed, 0xe0}),
                          corpus);
}

std::vector<ComparisonRow> run_benchmark(const RunConfig& config, const KnowledgeCorpus& corpus,
                                         const PolicyParams& sft, const PolicyParams& grpo,
                                         std::span<const std::uint64_t> seeds) {
  const std::vector<NamedPolicy> policies{
      uniform_random_policy(), retrieval_only_policy(), learned_policy("sft", sft, corpus),
      learned_policy("grpo", grpo, corpus)};
  return compare_policies(
      policies, [&](std::uint64_t s) { return eval_population(config, corpus, s); }, seeds, corpus,
      config.env);
}

RankingScores score_cases(std::span<const RankingCase> cases) {
  RankingScores s;
  s.cases = cases.size();
  for (int k : kNdcgCutoffs) s.ndcg[k] = 0.0;
  if (cases.empty()) return s;
  s.p_at_1 = precision_at_1(cases);
  for (int k : kNdcgCutoffs) {
    double sum = 0.0;
    for (const auto& c : cases) sum += ndcg_at_k(c, k);
    s.ndcg[k] = sum / static_cast<double>(cases.size());
  }
  return s;
}

RankingScores ranking_scores(const PolicyParams& params, std::span<const ExpertRecord> records,
                             const KnowledgeCorpus& corpus) {
  std::vector<RankingCase> cases;
  for (const auto& r : records) {
    cases.push_back({rank_by_policy(params, r.state, r.profile, corpus, r.candidates), r.grades});
  }
  return score_cases(cases);
}

}  // namespace pxplore
