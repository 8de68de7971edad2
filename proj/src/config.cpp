#include "pxplore/config.hpp"

#include <cstdlib>
#include <string>

#include "pxplore/error.hpp"

namespace pxplore {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError("config: " + where + key + " has the wrong type");
  }
}

const nlohmann::json& object_at(const nlohmann::json& j, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw FormatError(std::string("config: '") + key + "' must be an object");
  return j.at(key);
}

}  // namespace

ExpertConfig RunConfig::expert_config() const {
  ExpertConfig e;
  e.lookahead = expert_lookahead;
  e.gamma = env.gamma;
  e.acceptable_band = expert_band;
  e.retrieval = env.retrieval;
  e.weights = env.weights;
  e.profiler = env.profiler;
  return e;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("config: top level must be an object");
  RunConfig c;

  const auto& paths = object_at(j, "paths");
  read(paths, "corpus_spec", c.paths.corpus_spec, "paths.");
  read(paths, "corpus", c.paths.corpus, "paths.");
  read(paths, "dataset", c.paths.dataset, "paths.");
  read(paths, "checkpoints", c.paths.checkpoints, "paths.");
  read(paths, "reports", c.paths.reports, "paths.");

  const auto& seeds = object_at(j, "seeds");
  read(seeds, "data", c.seeds.data, "seeds.");
  read(seeds, "train", c.seeds.train, "seeds.");
  read(seeds, "eval", c.seeds.eval, "seeds.");

  const auto& retrieval = object_at(j, "retrieval");
  read(retrieval, "alpha", c.env.retrieval.alpha, "retrieval.");
  read(retrieval, "k", c.env.retrieval.k, "retrieval.");
  if (c.env.retrieval.alpha < 0.0 || c.env.retrieval.alpha > 1.0) {
    throw FormatError("config: retrieval.alpha must lie in [0, 1]");
  }
  if (c.env.retrieval.k < 1) throw FormatError("config: retrieval.k must be >= 1");

  const auto& reward = object_at(j, "reward");
  const auto& weights = object_at(reward, "weights");
  for (Dimension d : kAllDimensions) {
    const std::string code(dimension_code(d));
    read(weights, code.c_str(), c.env.weights.per_dimension[static_cast<std::size_t>(d)], "reward.weights.");
    if (c.env.weights.weight(d) < 0.0) throw FormatError("config: reward.weights." + code + " must be >= 0");
  }
  read(reward, "clamp_negative", c.env.weights.clamp_negative, "reward.");

  const auto& population = object_at(j, "population");
  c.population = population_config_from_json(population);
  read(population, "size", c.population_size, "population.");
  if (c.population_size < 1) throw FormatError("config: population.size must be >= 1");

  const auto& expert = object_at(j, "expert");
  read(expert, "lookahead", c.expert_lookahead, "expert.");
  read(expert, "acceptable_band", c.expert_band, "expert.");
  if (c.expert_lookahead < 1) throw FormatError("config: expert.lookahead must be >= 1");

  const auto& train = object_at(j, "train");
  const auto& sft = object_at(train, "sft");
  read(sft, "learning_rate", c.train.sft.learning_rate, "train.sft.");
  read(sft, "epochs", c.train.sft.epochs, "train.sft.");
  read(sft, "batch_size", c.train.sft.batch_size, "train.sft.");
  const auto& grpo = object_at(train, "grpo");
  read(grpo, "learning_rate", c.train.grpo.learning_rate, "train.grpo.");
  read(grpo, "epochs", c.train.grpo.epochs, "train.grpo.");
  read(grpo, "group_size", c.train.grpo.group_size, "train.grpo.");
  read(grpo, "groups_per_epoch", c.train.grpo.groups_per_epoch, "train.grpo.");
  read(grpo, "epsilon", c.train.grpo.epsilon, "train.grpo.");
  if (grpo.contains("clip_ratio") && !grpo.at("clip_ratio").is_null()) {
    double clip = 0.0;
    read(grpo, "clip_ratio", clip, "train.grpo.");
    c.train.grpo.clip_ratio = clip;
  }
  if (c.train.sft.epochs < 0 || c.train.sft.batch_size < 1 || c.train.grpo.epochs < 0 ||
      c.train.grpo.group_size < 1 || c.train.grpo.groups_per_epoch < 1) {
    throw FormatError("config: train block has an out-of-range count");
  }

  read(j, "gamma", c.env.gamma, "");
  read(j, "horizon", c.env.horizon, "");
  if (c.env.gamma < 0.0 || c.env.gamma > 1.0) throw FormatError("config: gamma must lie in [0, 1]");
  if (c.env.horizon < 1) throw FormatError("config: horizon must be >= 1");
  c.train.grpo.gamma = c.env.gamma;
  c.train.grpo.horizon = c.env.horizon;

  const auto& eval = object_at(j, "eval");
  read(eval, "population_size", c.eval_population_size, "eval.");
  if (c.eval_population_size < 1) throw FormatError("config: eval.population_size must be >= 1");
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json weights;
  for (Dimension d : kAllDimensions) weights[std::string(dimension_code(d))] = c.env.weights.weight(d);
  nlohmann::json population = to_json(c.population);
  population["size"] = c.population_size;
  nlohmann::json grpo = {{"learning_rate", c.train.grpo.learning_rate},
                         {"epochs", c.train.grpo.epochs},
                         {"group_size", c.train.grpo.group_size},
                         {"groups_per_epoch", c.train.grpo.groups_per_epoch},
                         {"epsilon", c.train.grpo.epsilon},
                         {"clip_ratio", nullptr}};
  if (c.train.grpo.clip_ratio) grpo["clip_ratio"] = *c.train.grpo.clip_ratio;
  return {{"paths",
           {{"corpus_spec", c.paths.corpus_spec},
            {"corpus", c.paths.corpus},
            {"dataset", c.paths.dataset},
            {"checkpoints", c.paths.checkpoints},
            {"reports", c.paths.reports}}},
          {"seeds", {{"data", c.seeds.data}, {"train", c.seeds.train}, {"eval", c.seeds.eval}}},
          {"retrieval", {{"alpha", c.env.retrieval.alpha}, {"k", c.env.retrieval.k}}},
          {"reward", {{"weights", weights}, {"clamp_negative", c.env.weights.clamp_negative}}},
          {"population", population},
          {"expert", {{"lookahead", c.expert_lookahead}, {"acceptable_band", c.expert_band}}},
          {"train",
           {{"sft",
             {{"learning_rate", c.train.sft.learning_rate},
              {"epochs", c.train.sft.epochs},
              {"batch_size", c.train.sft.batch_size}}},
            {"grpo", grpo}}},
          {"gamma", c.env.gamma},
          {"horizon", c.env.horizon},
          {"eval", {{"population_size", c.eval_population_size}}}};
}

void override_seeds(RunConfig& c, std::uint64_t seed) {
  c.seeds.data = seed;
  c.seeds.train = seed;
  for (std::size_t i = 0; i < c.seeds.eval.size(); ++i) c.seeds.eval[i] = seed + i;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("PXPLORE_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  if (s.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("PXPLORE_SEED must be an unsigned integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw FormatError("PXPLORE_SEED out of range: '" + s + "'");
  }
}

}  // namespace pxplore
