#pragma once
// Synthetic corpus generation from a cluster spec.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/bloom.hpp"
#include "pxplore/corpus.hpp"

namespace pxplore {

struct ClusterSpec {
  std::string name;
  int actions = 0;
};

struct CorpusSpec {
  std::vector<ClusterSpec> clusters;
  // Relative weight of each Bloom level, Remembering .. Creating.
  std::array<double, kBloomLevels> bloom_mix{0.15, 0.25, 0.25, 0.2, 0.1, 0.05};
  int cluster_vocabulary = 16;
  int shared_vocabulary = 40;
  int keywords_per_action = 3;
  int body_length = 40;
  double shared_fraction = 0.35;  // share of body tokens drawn from shared vocabulary
};

// 148 actions over 12 named clusters.
CorpusSpec default_corpus_spec();

// Accepts either explicit "clusters" or "cluster_count" + "total_actions"
// (actions spread as evenly as possible, earlier clusters take the remainder).
// Throws FormatError naming the offending field.
CorpusSpec corpus_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorpusSpec& spec);

std::vector<LearningAction> generate_corpus(const CorpusSpec& spec, std::uint64_t seed);

}  // namespace pxplore
