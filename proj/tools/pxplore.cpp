#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pxplore/config.hpp"
#include "pxplore/corpus_gen.hpp"
#include "pxplore/error.hpp"
#include "pxplore/pipeline.hpp"
#include "pxplore/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pxplore;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kDataInsufficient = 3, kDomainError = 4 };

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::string read_text(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kInputError, what + " not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_file(const std::string& path, const std::string& what) {
  const std::string text = read_text(path, what);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw CliError(kInputError, path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                    ": malformed " + what + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw CliError(kInputError, "cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig load_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = run_config_from_json(parse_file(c.config_path, "config"));
  if (c.seed) override_seeds(cfg, *c.seed);
  if (const auto s = env_seed()) override_seeds(cfg, *s);
  return cfg;
}

KnowledgeCorpus load_corpus(const std::string& path) {
  return corpus_from_json(parse_file(path, "corpus"));
}

struct Dataset {
  std::uint64_t seed = 0;
  std::vector<SimLearner> population;
  std::vector<ExpertRecord> records;
};

Dataset load_dataset(const std::string& path) {
  const json j = parse_file(path, "dataset");
  Dataset d;
  try {
    d.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("population")) d.population.push_back(sim_learner_from_json(p));
    for (const auto& r : j.at("records")) d.records.push_back(expert_record_from_json(r));
  } catch (const json::exception& e) {
    throw FormatError("dataset " + path + ": " + e.what());
  }
  return d;
}

Checkpoint load_checkpoint(const std::string& path) {
  return checkpoint_from_json(parse_file(path, "checkpoint"));
}

std::string pick(const std::string& flag, const std::string& fallback) { return flag.empty() ? fallback : flag; }

json cmd_corpus_gen(const Common& c, const std::string& spec_flag) {
  const RunConfig cfg = load_config(c);
  const std::string spec_path = pick(spec_flag, cfg.paths.corpus_spec);
  const CorpusSpec spec = spec_path.empty() ? default_corpus_spec()
                                            : corpus_spec_from_json(parse_file(spec_path, "corpus spec"));
  int total = 0;
  for (const auto& cl : spec.clusters) total += cl.actions;
  if (spec.clusters.empty() || total == 0) warn("corpus spec declares no actions; writing an empty corpus");
  const KnowledgeCorpus corpus(generate_corpus(spec, cfg.seeds.data));
  const std::string out = pick(c.out, cfg.paths.corpus);
  write_json(out, to_json(corpus));
  return {{"command", "corpus-gen"}, {"out", out}, {"seed", cfg.seeds.data},
          {"clusters", spec.clusters.size()}, {"actions", corpus.size()}};
}

json stats_json(const DatasetStats& s) { return to_json(s); }

json cmd_dataset_build(const Common& c, const std::string& corpus_flag) {
  const RunConfig cfg = load_config(c);
  const KnowledgeCorpus corpus = load_corpus(pick(corpus_flag, cfg.paths.corpus));
  if (corpus.size() < cfg.env.retrieval.k) {
    throw CliError(kDataInsufficient, "corpus has " + std::to_string(corpus.size()) +
                                          " actions, fewer than retrieval k = " +
                                          std::to_string(cfg.env.retrieval.k));
  }
  const DataBundle data = build_data(cfg, corpus, cfg.seeds.data);
  const auto [n_train, n_test] = split_sizes(cfg.population_size);
  json population = json::array();
  for (const auto& p : data.population) population.push_back(to_json(p));
  json records = json::array();
  for (const auto& r : data.records) records.push_back(to_json(r));
  const std::string out = pick(c.out, cfg.paths.dataset);
  write_json(out, {{"seed", cfg.seeds.data},
                   {"sessions", data.records.size()},
                   {"split", {{"train", n_train}, {"test", n_test}}},
                   {"stats", stats_json(data.stats)},
                   {"population", population},
                   {"records", records}});
  return {{"command", "dataset-build"}, {"out", out}, {"seed", cfg.seeds.data},
          {"sessions", data.records.size()}, {"split", {{"train", n_train}, {"test", n_test}}},
          {"stats", stats_json(data.stats)}};
}

json cmd_train(const Common& c, const std::string& mode, const std::string& corpus_flag,
               const std::string& dataset_flag, const std::string& init_flag) {
  const RunConfig cfg = load_config(c);
  const KnowledgeCorpus corpus = load_corpus(pick(corpus_flag, cfg.paths.corpus));
  const Dataset data = load_dataset(pick(dataset_flag, cfg.paths.dataset));
  const std::string dir = pick(c.out, cfg.paths.checkpoints);
  const std::string sft_path = (fs::path(dir) / "sft.json").string();
  const std::string grpo_path = (fs::path(dir) / "grpo.json").string();
  json summary = {{"command", "train"}, {"mode", mode}, {"seed", cfg.seeds.train}, {"out", dir}};

  PolicyParams start;
  if (mode == "sft" || mode == "both") {
    const auto train = split_records(data.records, "train");
    if (train.empty()) throw CliError(kInputError, "dataset has no train records");
    const SftResult sft = train_sft(PolicyParams{}, train, corpus, cfg.train.sft, mix_seed({cfg.seeds.train, 0x51}));
    std::string log;
    for (std::size_t e = 1; e < sft.loss_curve.size(); ++e) {
      log += json{{"epoch", e}, {"loss", sft.loss_curve[e]}}.dump() + "\n";
    }
    write_text((fs::path(dir) / "sft_log.jsonl").string(), log);
    write_json(sft_path, to_json(Checkpoint{sft.params, ValueParams{}}));
    summary["sft"] = {{"checkpoint", sft_path},
                      {"epochs", sft.loss_curve.size() - 1},
                      {"initial_loss", sft.loss_curve.front()},
                      {"final_loss", sft.loss_curve.back()}};
    start = sft.params;
  }
  if (mode == "grpo" || mode == "both") {
    if (mode == "grpo") {
      const std::string init = pick(init_flag, sft_path);
      if (fs::exists(init)) {
        start = load_checkpoint(init).policy;
      } else {
        warn("no SFT checkpoint at " + init + "; GRPO starts from zero parameters");
      }
    }
    if (data.population.empty()) throw CliError(kInputError, "dataset has no population");
    std::string log;
    const GrpoResult grpo = train_grpo(start, data.population, corpus, cfg.env, cfg.train.grpo,
                                       mix_seed({cfg.seeds.train, 0x52}),
                                       [&log](const EpochLog& e) { log += to_json(e).dump() + "\n"; });
    write_text((fs::path(dir) / "grpo_log.jsonl").string(), log);
    if (grpo.diverged) throw CliError(kDomainError, "GRPO diverged: " + grpo.message);
    write_json(grpo_path, to_json(Checkpoint{grpo.params, grpo.value}));
    summary["grpo"] = {{"checkpoint", grpo_path},
                       {"epochs", grpo.logs.size()},
                       {"updates", grpo.updates},
                       {"final_mean_return", grpo.logs.empty() ? 0.0 : grpo.logs.back().mean_return}};
  }
  return summary;
}

json cmd_plan(const Common& c, const std::string& checkpoint_flag, const std::string& session_path,
              const std::string& corpus_flag) {
  const RunConfig cfg = load_config(c);
  const KnowledgeCorpus corpus = load_corpus(pick(corpus_flag, cfg.paths.corpus));
  const Checkpoint cp = load_checkpoint(pick(checkpoint_flag, (fs::path(cfg.paths.checkpoints) / "grpo.json").string()));
  const json s = parse_file(session_path, "session");
  std::vector<InteractionSummary> summaries;
  std::vector<std::string> history;
  LearnerState state;
  try {
    for (const auto& x : s.at("summaries")) summaries.push_back(interaction_from_json(x));
    if (s.contains("history")) history = s.at("history").get<std::vector<std::string>>();
    if (s.contains("state")) state = state_from_json(s.at("state"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("session: ") + e.what());
  }
  const LearnerProfile profile = build_profile(summaries, session_keywords(summaries), cfg.env.profiler);
  const TokenBag query = profile_query(profile);
  const CandidateSet candidates = retrieve(query, corpus, history, cfg.env.retrieval);
  if (candidates.empty()) throw CliError(kDomainError, "corpus exhausted: no unvisited actions remain");
  const auto ids = candidates.ids();
  const std::string chosen = plan_next(cp.policy, cp.value, std::nullopt, state, profile, corpus, ids, cfg.env.gamma);
  const ActionDistribution dist = action_distribution(cp.policy, state, profile, corpus, ids);
  json scored = json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    scored.push_back({{"id", ids[i]},
                      {"topic", corpus.at(ids[i]).topic},
                      {"retrieval_score", candidates.ranked[i].score},
                      {"policy_prob", dist.probs[i]}});
  }
  json rationale = {{"chosen", chosen}, {"profile", to_json(profile)}, {"candidates", scored}};
  if (!c.out.empty()) write_json(c.out, rationale);
  rationale["command"] = "plan";
  return rationale;
}

std::string ranking_csv(const std::vector<std::pair<std::string, RankingScores>>& rows) {
  std::string out = "policy,cases,P@1";
  for (int k : kNdcgCutoffs) out += ",NDCG@" + std::to_string(k);
  out += "\n";
  char buf[64];
  for (const auto& [name, s] : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", s.p_at_1);
    out += name + "," + std::to_string(s.cases) + "," + buf;
    for (int k : kNdcgCutoffs) {
      std::snprintf(buf, sizeof(buf), "%.6f", s.ndcg.at(k));
      out += std::string(",") + buf;
    }
    out += "\n";
  }
  return out;
}

RankingScores retrieval_ranking(std::span<const ExpertRecord> records) {
  std::vector<RankingCase> cases;
  for (const auto& r : records) cases.push_back({r.candidates, r.grades});
  return score_cases(cases);
}

json cmd_eval(const Common& c, const std::string& ckpt_flag, const std::string& corpus_flag,
              const std::string& dataset_flag, const std::optional<std::vector<std::uint64_t>>& seeds_flag) {
  RunConfig cfg = load_config(c);
  if (seeds_flag && !env_seed()) cfg.seeds.eval = *seeds_flag;
  if (cfg.seeds.eval.empty()) throw CliError(kInputError, "empty evaluation seed list");
  const KnowledgeCorpus corpus = load_corpus(pick(corpus_flag, cfg.paths.corpus));
  const std::string dir = pick(ckpt_flag, cfg.paths.checkpoints);
  const Checkpoint sft = load_checkpoint((fs::path(dir) / "sft.json").string());
  const Checkpoint grpo = load_checkpoint((fs::path(dir) / "grpo.json").string());
  const Dataset data = load_dataset(pick(dataset_flag, cfg.paths.dataset));
  const auto test = split_records(data.records, "test");

  const auto rows = run_benchmark(cfg, corpus, sft.policy, grpo.policy, cfg.seeds.eval);
  std::vector<std::pair<std::string, AlignmentReport>> reports;
  for (const auto& r : rows) reports.emplace_back(r.name, r.report);
  const std::vector<std::pair<std::string, RankingScores>> ranking{
      {"retrieval-only", retrieval_ranking(test)},
      {"sft", ranking_scores(sft.policy, test, corpus)},
      {"grpo", ranking_scores(grpo.policy, test, corpus)}};

  const std::string out = pick(c.out, cfg.paths.reports);
  write_text((fs::path(out) / "alignment.csv").string(), alignment_csv(reports));
  write_text((fs::path(out) / "ranking.csv").string(), ranking_csv(ranking));
  write_text((fs::path(out) / "comparison.csv").string(), comparison_csv(rows));

  json policies = json::array();
  for (const auto& r : rows) {
    policies.push_back({{"policy", r.name},
                        {"mean_return", r.mean_return},
                        {"std_return", r.std_return},
                        {"per_seed_return", r.per_seed_return},
                        {"alignment", to_json(r.report)}});
  }
  json rank = json::array();
  for (const auto& [name, s] : ranking) {
    json ndcg = json::object();
    for (const auto& [k, v] : s.ndcg) ndcg[std::to_string(k)] = v;
    rank.push_back({{"policy", name}, {"cases", s.cases}, {"p_at_1", s.p_at_1}, {"ndcg", ndcg}});
  }
  const json summary = {{"seeds", cfg.seeds.eval}, {"policies", policies}, {"ranking", rank}};
  write_json((fs::path(out) / "eval.json").string(), summary);
  json result = {{"command", "eval"}, {"out", out}, {"seeds", cfg.seeds.eval}};
  for (const auto& r : rows) result["mean_return"][r.name] = r.mean_return;
  return result;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    try {
      if (item.front() == '-') throw std::invalid_argument(item);
      out.push_back(std::stoull(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CliError(kInputError, "invalid seed '" + item + "'");
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

json cmd_report(const Common& c, const std::string& reports_flag) {
  const RunConfig cfg = load_config(c);
  const std::string dir = pick(reports_flag, cfg.paths.reports);
  const json e = parse_file((fs::path(dir) / "eval.json").string(), "evaluation summary");
  std::string md;
  try {
    md = "# Evaluation report\n\nSeeds: " + e.at("seeds").dump() + "\n\n";
    md += "## Cumulative return\n\n| Policy | Mean | Std | Alignment rate (%) |\n|---|---|---|---|\n";
    for (const auto& p : e.at("policies")) {
      md += "| " + p.at("policy").get<std::string>() + " | " + fixed(p.at("mean_return"), 4) + " | " +
            fixed(p.at("std_return"), 4) + " | " + fixed(p.at("alignment").at("Avg").at("alignment_rate"), 2) + " |\n";
    }
    md += "\n## Alignment by dimension (%)\n\n| Policy | O_L | O_S | M_I | M_E | Avg |\n|---|---|---|---|---|---|\n";
    for (const auto& p : e.at("policies")) {
      const auto& a = p.at("alignment");
      md += "| " + p.at("policy").get<std::string>();
      for (const char* d : {"O_L", "O_S", "M_I", "M_E", "Avg"}) md += " | " + fixed(a.at(d).at("alignment_rate"), 2);
      md += " |\n";
    }
    md += "\n## Held-out ranking\n\n| Policy | P@1";
    for (int k : kNdcgCutoffs) md += " | NDCG@" + std::to_string(k);
    md += " |\n|---|---";
    for (std::size_t i = 0; i < std::size(kNdcgCutoffs); ++i) md += "|---";
    md += "|\n";
    for (const auto& s : e.at("ranking")) {
      md += "| " + s.at("policy").get<std::string>() + " | " + fixed(s.at("p_at_1"), 3);
      for (int k : kNdcgCutoffs) md += " | " + fixed(s.at("ndcg").at(std::to_string(k)), 3);
      md += " |\n";
    }
  } catch (const json::exception& ex) {
    throw FormatError(std::string("evaluation summary: ") + ex.what());
  }
  const std::string out = pick(c.out, (fs::path(dir) / "report.md").string());
  write_text(out, md);
  return {{"command", "report"}, {"out", out}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized learning-path planner: data, training, planning and evaluation"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON run configuration");
    sub->add_option("--seed", common.seed, "Replace every configured seed");
    sub->add_option("--out", common.out, "Output file or directory");
  };

  std::string spec, corpus, dataset, checkpoint, init, session, reports, mode = "both";
  std::string seeds_text;

  auto* gen = app.add_subcommand("corpus-gen", "Generate a synthetic action corpus");
  add_common(gen);
  gen->add_option("--spec", spec, "Corpus spec JSON (default: built-in 148-action spec)");

  auto* build = app.add_subcommand("dataset-build", "Spawn learners and label expert next actions");
  add_common(build);
  build->add_option("--corpus", corpus, "Corpus JSON");

  auto* train = app.add_subcommand("train", "Train the policy (sft, grpo or both)");
  add_common(train);
  train->add_option("--mode", mode, "sft | grpo | both")->check(CLI::IsMember({"sft", "grpo", "both"}));
  train->add_option("--corpus", corpus, "Corpus JSON");
  train->add_option("--dataset", dataset, "Dataset JSON");
  train->add_option("--init", init, "SFT checkpoint used to start grpo mode");

  auto* plan = app.add_subcommand("plan", "Recommend the next action for a session log");
  add_common(plan);
  plan->add_option("--checkpoint", checkpoint, "Policy checkpoint JSON");
  plan->add_option("--session", session, "Session log JSON")->required();
  plan->add_option("--corpus", corpus, "Corpus JSON");

  auto* eval = app.add_subcommand("eval", "Compare policies and score held-out rankings");
  add_common(eval);
  eval->add_option("--checkpoints", checkpoint, "Directory holding sft.json and grpo.json");
  eval->add_option("--corpus", corpus, "Corpus JSON");
  eval->add_option("--dataset", dataset, "Dataset JSON");
  auto* seeds_opt = eval->add_option("--seeds", seeds_text, "Comma-separated evaluation seeds");

  auto* report = app.add_subcommand("report", "Render evaluation outputs as markdown tables");
  add_common(report);
  report->add_option("--reports", reports, "Directory holding eval.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  json summary;
  int code = kOk;
  try {
    if (*gen) {
      summary = cmd_corpus_gen(common, spec);
    } else if (*build) {
      summary = cmd_dataset_build(common, corpus);
    } else if (*train) {
      summary = cmd_train(common, mode, corpus, dataset, init);
    } else if (*plan) {
      summary = cmd_plan(common, checkpoint, session, corpus);
    } else if (*eval) {
      std::optional<std::vector<std::uint64_t>> seeds;
      if (seeds_opt->count() > 0) seeds = parse_seed_list(seeds_text);
      summary = cmd_eval(common, checkpoint, corpus, dataset, seeds);
    } else if (*report) {
      summary = cmd_report(common, reports);
    }
    summary["status"] = "ok";
  } catch (const CliError& e) {
    code = e.code;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const FormatError& e) {
    code = kInputError;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const InvalidArgument& e) {
    code = kInputError;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const Divergence& e) {
    code = kDomainError;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const fs::filesystem_error& e) {
    code = kInputError;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const json::exception& e) {
    code = kInputError;
    summary = {{"status", "error"}, {"code", code}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = 1;
    summary = {{"status", "error"}, {"code", code}, {"message", std::string("internal error: ") + e.what()}};
  }
  if (code != kOk) std::cerr << "error: " << summary.at("message").get<std::string>() << "\n";
  std::cout << summary.dump() << "\n";
  return code;
}
