#pragma once
// Run configuration: artifact paths, named seeds and every module block.
//
// {
//   "paths":      {"corpus_spec", "corpus", "dataset",
//                  "checkpoints", "reports"},
//   "seeds":      {"data": u64, "train": u64, "eval": [u64, ...]},
//   "retrieval":  {"alpha": 0.2, "k": 10},
//   "reward":     {"weights": {"O_L": 1, ...}, "clamp_negative": false},
//   "population": {"size": 300, ...SimPopulationConfig fields},
//   "expert":     {"lookahead": 2, "acceptable_band": 0.75},
//   "train":      {"sft": {...}, "grpo": {...}},
//   "gamma": 0.9, "horizon": 5,
//   "eval":       {"population_size": 300}
// }
// Missing keys take defaults. PXPLORE_SEED, when set, replaces every seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/episode.hpp"
#include "pxplore/sim.hpp"
#include "pxplore/training.hpp"

namespace pxplore {

struct RunPaths {
  std::string corpus_spec;  // empty: built-in default spec
  std::string corpus = "artifacts/corpus.json";
  std::string dataset = "artifacts/dataset.json";
  std::string checkpoints = "artifacts/checkpoints";
  std::string reports = "artifacts/reports";
};

struct RunSeeds {
  std::uint64_t data = 20250101;
  std::uint64_t train = 20250202;
  std::vector<std::uint64_t> eval{101, 102, 103, 104, 105, 106, 107, 108, 109, 110};
};

struct RunConfig {
  RunPaths paths;
  RunSeeds seeds;
  EnvConfig env;
  SimPopulationConfig population;
  int population_size = 300;
  int eval_population_size = 300;
  int expert_lookahead = 2;
  double expert_band = 0.75;
  TrainConfig train;

  ExpertConfig expert_config() const;
};

// Throws FormatError with the offending key.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

// Replaces every seed with `seed`; eval seeds become seed, seed+1, ... keeping
// their count.
void override_seeds(RunConfig& c, std::uint64_t seed);
// Reads PXPLORE_SEED; FormatError when set but not an unsigned integer.
std::optional<std::uint64_t> env_seed();

}  // namespace pxplore
