#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pxplore/corpus_gen.hpp"
#include "pxplore/pipeline.hpp"
#include "support.hpp"

using namespace pxplore;
using namespace pxplore::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

Outcome reward_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const StatePair p = random_state_pair(rng);
    const RewardWeights w = random_weights(rng);
    worst = std::max(worst, std::abs(compute_reward(p.prev, p.next, w).total - brute_force_reward(p.prev, p.next, w)));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-12 && t < 5.0, "max abs error " + num(worst) + " over 1000 pairs in " + num(t, 3) + " s"};
}

Outcome advantage_normalization() {
  const auto t0 = Clock::now();
  const double eps = 1e-8;
  Group hand(1);
  for (double r : {0.5, 1.5}) {
    TrajectoryStep s;
    s.reward = r;
    hand[0].push_back(s);
  }
  const GroupAdvantages h = grpo_advantages(hand, 0.9, eps);
  const bool hand_ok = std::abs(h[0][0] + 1.0) < 1e-7 && std::abs(h[0][1] - 1.0) < 1e-7;

  Rng rng(2002);
  int tested = 0;
  double worst_mean = 0.0, worst_std = 0.0;
  while (tested < 100) {
    const Group g = random_group(rng, PolicyParams{}, static_cast<int>(rng.uniform_int(2, 8)),
                                 static_cast<int>(rng.uniform_int(1, 5)));
    std::vector<double> rewards;
    for (const auto& traj : g) {
      for (const auto& s : traj) rewards.push_back(s.reward);
    }
    const double n = static_cast<double>(rewards.size());
    const double rm = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
    double rv = 0.0;
    for (double r : rewards) rv += (r - rm) * (r - rm);
    if (std::sqrt(rv / n) <= 100.0 * eps) continue;
    ++tested;
    std::vector<double> flat;
    const GroupAdvantages a = grpo_advantages(g, 0.9, eps);
    for (const auto& traj : a) flat.insert(flat.end(), traj.begin(), traj.end());
    const double mean = std::accumulate(flat.begin(), flat.end(), 0.0) / n;
    double var = 0.0;
    for (double x : flat) var += (x - mean) * (x - mean);
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_std = std::max(worst_std, std::abs(std::sqrt(var / n) - 1.0));
  }
  const double t = seconds_since(t0);
  return {hand_ok && worst_mean < 1e-6 && worst_std < 1e-6 && t < 5.0,
          std::string("hand case ") + (hand_ok ? "ok" : "wrong") + ", max |mean| " + num(worst_mean) +
              ", max |std-1| " + num(worst_std) + " in " + num(t, 3) + " s"};
}

double grad_error(const std::function<LossAndGrad(const PolicyParams&)>& f, const PolicyParams& p) {
  const LossAndGrad lg = f(p);
  const auto obj = [&](std::span<const double> t) { return f(with_theta(p, t)).value; };
  return grad_check(obj, std::vector<double>(lg.grad.begin(), lg.grad.end()), theta_vec(p), 1e-5);
}

Outcome gradient_verification() {
  const auto t0 = Clock::now();
  Rng rng(3003);
  double sft_worst = 0.0, grpo_worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const PolicyParams p = random_params(rng);
    std::vector<Decision> batch;
    for (int i = 0; i < 8; ++i) batch.push_back(random_decision(rng, static_cast<std::size_t>(rng.uniform_int(1, 10))));
    sft_worst = std::max(sft_worst, grad_error([&](const PolicyParams& q) { return sft_loss_and_grad(q, batch); }, p));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const PolicyParams old = random_params(rng);
    const PolicyParams p = random_params(rng, 0.5);
    const std::vector<Group> groups{random_group(rng, old, 4, 3), random_group(rng, old, 3, 5)};
    const std::vector<GroupAdvantages> adv{grpo_advantages(groups[0], 0.9, 1e-8), grpo_advantages(groups[1], 0.9, 1e-8)};
    grpo_worst = std::max(grpo_worst, grad_error([&](const PolicyParams& q) {
                            return grpo_objective(q, groups, adv, std::nullopt);
                          }, p));
  }
  const double t = seconds_since(t0);
  return {sft_worst < 1e-5 && grpo_worst < 1e-5 && t < 30.0,
          "max rel error sft " + num(sft_worst) + ", grpo " + num(grpo_worst) + " over 50+50 configs in " +
              num(t, 3) + " s"};
}

Outcome training_order() {
  const auto t0 = Clock::now();
  const RunConfig cfg;
  const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), cfg.seeds.data));
  const DataBundle data = build_data(cfg, corpus, cfg.seeds.data);
  const TrainedPolicies trained = train_both(cfg, corpus, data, cfg.seeds.train);
  const auto rows = run_benchmark(cfg, corpus, trained.sft, trained.grpo, cfg.seeds.eval);
  const double uniform = rows[0].mean_return, retrieval = rows[1].mean_return;
  const double sft = rows[2].mean_return, grpo = rows[3].mean_return;
  int grpo_wins = 0;
  for (std::size_t s = 0; s < cfg.seeds.eval.size(); ++s) grpo_wins += rows[3].per_seed_return[s] > rows[2].per_seed_return[s];
  const double lift = grpo / uniform - 1.0;
  const double t = seconds_since(t0);
  const bool ok = corpus.size() == 148 && cfg.population_size == 300 && cfg.env.horizon == 5 &&
                  cfg.env.gamma == 0.9 && cfg.seeds.eval.size() == 10 && grpo > sft && sft > retrieval &&
                  retrieval > uniform && lift >= 0.25 && t < 600.0;
  return {ok, "mean return grpo " + num(grpo, 4) + " > sft " + num(sft, 4) + " > retrieval " + num(retrieval, 4) +
                  " > uniform " + num(uniform, 4) + ", grpo lift " + num(100.0 * lift, 3) +
                  "%, grpo beats sft on " + std::to_string(grpo_wins) + "/10 paired seeds, " + num(t, 3) + " s"};
}

Outcome sft_effectiveness() {
  const auto t0 = Clock::now();
  const RunConfig cfg;
  double sum = 0.0;
  std::string per_seed;
  bool shape_ok = true;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), s));
    const DataBundle data = build_data(cfg, corpus, s);
    const auto train = split_records(data.records, "train");
    const auto test = split_records(data.records, "test");
    shape_ok = shape_ok && train.size() == 250 && test.size() == 50;
    const SftResult sft = train_sft(PolicyParams{}, train, corpus, cfg.train.sft, mix_seed({s, 0x51}));
    const double p1 = ranking_scores(sft.params, test, corpus).p_at_1;
    sum += p1;
    per_seed += (per_seed.empty() ? "" : " ") + num(p1, 3);
  }
  const double mean = sum / 10.0;
  const double t = seconds_since(t0);
  return {shape_ok && mean >= 3.0 * 0.1 && t < 120.0,
          "mean held-out P@1 " + num(mean, 4) + " (need >= 0.3; per seed " + per_seed + ") in " + num(t, 3) + " s"};
}

Outcome ranking_oracles() {
  RankingCase worked;
  worked.ranked = {"a", "b", "c"};
  worked.grades = {{"a", 0}, {"b", 2}, {"c", 1}};
  const double w = ndcg_at_k(worked, 3);
  const bool worked_ok = std::abs(w - 0.6590) <= 1e-4;

  Rng rng(6006);
  bool ideal_ok = true;
  for (int t = 0; t < 200; ++t) {
    RankingCase c;
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    std::vector<int> grades;
    for (int i = 0; i < n; ++i) grades.push_back(static_cast<int>(rng.uniform_int(0, 2)));
    std::sort(grades.begin(), grades.end(), std::greater<>());
    for (int i = 0; i < n; ++i) {
      c.ranked.push_back("x" + std::to_string(i));
      c.grades[c.ranked.back()] = grades[static_cast<std::size_t>(i)];
    }
    for (int k : {1, 3, 5, 7, 10}) ideal_ok = ideal_ok && ndcg_at_k(c, k) == 1.0;
  }

  std::vector<RankingCase> cases;
  double ndcg1 = 0.0;
  for (int t = 0; t < 500; ++t) {
    RankingCase c;
    const int n = static_cast<int>(rng.uniform_int(2, 10));
    for (int i = 0; i < n; ++i) {
      c.ranked.push_back("y" + std::to_string(i));
      c.grades[c.ranked.back()] = 0;
    }
    c.grades[c.ranked[static_cast<std::size_t>(rng.uniform_int(0, n - 1))]] = 2;
    rng.shuffle(c.ranked);
    ndcg1 += ndcg_at_k(c, 1);
    cases.push_back(std::move(c));
  }
  const double p1 = precision_at_1(cases);
  const bool consistent = std::abs(p1 - ndcg1 / 500.0) < 1e-12;
  return {worked_ok && ideal_ok && consistent,
          "worked NDCG@3 " + num(w, 6) + ", ideal permutations " + (ideal_ok ? "all 1" : "not all 1") +
              ", P@1 " + num(p1, 4) + " vs mean NDCG@1 " + num(ndcg1 / 500.0, 4) + " over 500 cases"};
}

Outcome retrieval_contract() {
  const RetrievalConfig rc{0.2, 10};
  std::vector<LearningAction> actions = generate_corpus(default_corpus_spec(), 7007);
  const KnowledgeCorpus base(actions);
  std::vector<std::string> ids;
  for (const auto& [id, a] : base.actions()) ids.push_back(id);
  Rng rng(7007);
  bool ok = true;
  int checks = 0;
  for (int shuffle = 0; shuffle < 200; ++shuffle) {
    rng.shuffle(actions);
    const KnowledgeCorpus permuted(actions);
    TokenBag query;
    const auto& probe = base.at(ids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(ids.size()) - 1))]);
    for (const auto& k : probe.keywords) query[k] = rng.uniform(0.5, 2.0);
    query["persona:explorer"] = 1.0;
    std::vector<std::string> history;
    const auto h = rng.uniform_int(0, 2) == 0 ? rng.uniform_int(140, 148) : rng.uniform_int(0, 20);
    std::vector<std::string> pool = ids;
    rng.shuffle(pool);
    history.assign(pool.begin(), pool.begin() + h);
    const std::set<std::string> hset(history.begin(), history.end());
    const CandidateSet a = retrieve(query, base, history, rc);
    const CandidateSet b = retrieve(query, permuted, history, rc);
    const std::size_t expected = std::min<std::size_t>(10, ids.size() - hset.size());
    ok = ok && a.size() == expected && a.ids() == b.ids();
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) ok = ok && a.ranked[i].score == b.ranked[i].score;
    for (const auto& id : a.ids()) ok = ok && hset.count(id) == 0;
    ++checks;
  }
  return {ok, std::to_string(checks) + " shuffled corpora, alpha 0.2, k 10"};
}

Outcome dataset_shape() {
  const RunConfig cfg;
  const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), cfg.seeds.data));
  const DataBundle data = build_data(cfg, corpus, cfg.seeds.data);
  const std::array<int, kDimensions> target{326, 401, 338, 350};
  bool ok = data.stats.total.sessions == 300 && data.stats.train.sessions == 250 && data.stats.test.sessions == 50;
  std::string totals;
  for (std::size_t d = 0; d < kDimensions; ++d) {
    const int got = data.stats.total.components[d];
    ok = ok && std::abs(got - target[d]) <= 0.1 * target[d];
    totals += (totals.empty() ? "" : ",") + std::to_string(got);
  }
  return {ok, "sessions " + std::to_string(data.stats.total.sessions) + " split " +
                  std::to_string(data.stats.train.sessions) + "/" + std::to_string(data.stats.test.sessions) +
                  ", component totals (" + totals + ") vs (326,401,338,350)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = "PXPLORE_SEED=424242 \"" PXPLORE_CLI_PATH "\" " + args + " >>\"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool run_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = "\"" + dir.string() + "\"";
  const fs::path log = dir / "run.log";
  return run_cli("corpus-gen --out " + d + "/corpus.json", log) &&
         run_cli("dataset-build --corpus " + d + "/corpus.json --out " + d + "/dataset.json", log) &&
         run_cli("train --mode both --corpus " + d + "/corpus.json --dataset " + d + "/dataset.json --out " + d +
                     "/checkpoints",
                 log) &&
         run_cli("eval --checkpoints " + d + "/checkpoints --corpus " + d + "/corpus.json --dataset " + d +
                     "/dataset.json --out " + d + "/reports",
                 log);
}

Outcome end_to_end_determinism() {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "pxplore_acceptance_determinism";
  const fs::path a = root / "a", b = root / "b";
  if (!run_pipeline(a) || !run_pipeline(b)) return {false, "pipeline command failed; see " + root.string()};
  const std::vector<std::string> artifacts{"corpus.json",          "dataset.json",           "checkpoints/sft.json",
                                           "checkpoints/grpo.json", "checkpoints/sft_log.jsonl", "checkpoints/grpo_log.jsonl",
                                           "reports/alignment.csv", "reports/ranking.csv",    "reports/comparison.csv",
                                           "reports/eval.json"};
  std::vector<std::string> differing;
  for (const auto& f : artifacts) {
    const std::string x = slurp(a / f), y = slurp(b / f);
    if (x.empty() || x != y) differing.push_back(f);
  }
  const double t = seconds_since(t0);
  if (!differing.empty()) return {false, "differing or missing: " + differing.front()};
  fs::remove_all(root);
  return {true, std::to_string(artifacts.size()) + " artifacts byte-identical across two runs with PXPLORE_SEED=424242, " +
                    num(t, 3) + " s"};
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"reward oracle equivalence", reward_oracle},
    {"advantage normalization", advantage_normalization},
    {"gradient verification", gradient_verification},
    {"training-order benchmark", training_order},
    {"SFT effectiveness", sft_effectiveness},
    {"ranking-metric oracles", ranking_oracles},
    {"retrieval contract", retrieval_contract},
    {"dataset-shape fidelity", dataset_shape},
    {"end-to-end determinism", end_to_end_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(std::size(kCriteria)); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(std::size(kCriteria))) {
      std::cerr << "unknown criterion " << n << "\n";
      return 2;
    }
    const Criterion& c = kCriteria[n - 1];
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << n << "] " << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
