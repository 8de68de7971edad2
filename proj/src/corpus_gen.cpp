#include "pxplore/corpus_gen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "pxplore/error.hpp"
#include "pxplore/rng.hpp"
#include "pxplore/text.hpp"

namespace pxplore {

namespace {

constexpr const char* kDefaultClusters[] = {
    "algebra",  "calculus", "statistics", "genetics", "ecology",   "chemistry",
    "mechanics", "circuits", "databases",  "networks", "economics", "linguistics"};

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
constexpr const char* kNuclei[] = {"a", "e", "i", "o", "u"};

std::string pseudo_word(Rng& rng, int syllables) {
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += kOnsets[rng.uniform_int(0, std::size(kOnsets) - 1)];
    w += kNuclei[rng.uniform_int(0, std::size(kNuclei) - 1)];
  }
  return w;
}

// Distinct words not already present in `taken`.
std::vector<std::string> vocabulary(Rng& rng, const std::string& prefix, int n,
                                    std::set<std::string>& taken) {
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < n) {
    std::string w = prefix + pseudo_word(rng, 2 + static_cast<int>(rng.uniform_int(0, 1)));
    if (taken.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("corpus spec: field '") + key + "' has the wrong type");
  }
}

}  // namespace

CorpusSpec default_corpus_spec() {
  CorpusSpec spec;
  const int total = 148;
  const int n = static_cast<int>(std::size(kDefaultClusters));
  for (int i = 0; i < n; ++i) {
    spec.clusters.push_back({kDefaultClusters[i], total / n + (i < total % n ? 1 : 0)});
  }
  return spec;
}

CorpusSpec corpus_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("corpus spec: top level must be an object");
  CorpusSpec spec;
  if (j.contains("clusters")) {
    const auto& cs = j.at("clusters");
    if (!cs.is_array()) throw FormatError("corpus spec: 'clusters' must be an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i];
      const std::string where = "corpus spec: clusters[" + std::to_string(i) + "]";
      if (!c.is_object() || !c.contains("name") || !c.at("name").is_string()) {
        throw FormatError(where + ": needs a string 'name'");
      }
      if (!c.contains("actions") || !c.at("actions").is_number_integer() ||
          c.at("actions").get<int>() < 0) {
        throw FormatError(where + ": 'actions' must be a non-negative integer");
      }
      const std::string name = c.at("name").get<std::string>();
      if (tokenize(name).size() != 1 || tokenize(name).front() != name) {
        throw FormatError(where + ": name must be a single lowercase alphanumeric token");
      }
      spec.clusters.push_back({name, c.at("actions").get<int>()});
    }
  } else {
    const int count = field<int>(j, "cluster_count", 12);
    const int total = field<int>(j, "total_actions", 148);
    if (count < 0) throw FormatError("corpus spec: 'cluster_count' must be >= 0");
    if (total < 0) throw FormatError("corpus spec: 'total_actions' must be >= 0");
    for (int i = 0; i < count; ++i) {
      const std::string name = i < static_cast<int>(std::size(kDefaultClusters))
                                   ? kDefaultClusters[i]
                                   : "topic" + std::to_string(i);
      spec.clusters.push_back({name, total / count + (i < total % count ? 1 : 0)});
    }
  }
  std::set<std::string> names;
  for (const auto& c : spec.clusters) {
    if (!names.insert(c.name).second) throw FormatError("corpus spec: duplicate cluster '" + c.name + "'");
  }
  if (j.contains("bloom_mix")) {
    const auto& m = j.at("bloom_mix");
    if (!m.is_object()) throw FormatError("corpus spec: 'bloom_mix' must be an object keyed by Bloom level");
    spec.bloom_mix.fill(0.0);
    for (const auto& [k, v] : m.items()) {
      const auto b = parse_bloom(k);
      if (!b) throw FormatError("corpus spec: bloom_mix: unknown level '" + k + "'");
      if (!v.is_number() || v.get<double>() < 0) {
        throw FormatError("corpus spec: bloom_mix." + k + " must be a non-negative number");
      }
      spec.bloom_mix[static_cast<std::size_t>(*b)] = v.get<double>();
    }
    double sum = 0.0;
    for (double w : spec.bloom_mix) sum += w;
    if (sum <= 0.0) throw FormatError("corpus spec: bloom_mix weights sum to zero");
  }
  spec.cluster_vocabulary = field<int>(j, "cluster_vocabulary", spec.cluster_vocabulary);
  spec.shared_vocabulary = field<int>(j, "shared_vocabulary", spec.shared_vocabulary);
  spec.keywords_per_action = field<int>(j, "keywords_per_action", spec.keywords_per_action);
  spec.body_length = field<int>(j, "body_length", spec.body_length);
  spec.shared_fraction = field<double>(j, "shared_fraction", spec.shared_fraction);
  if (spec.keywords_per_action < 1) throw FormatError("corpus spec: 'keywords_per_action' must be >= 1");
  if (spec.cluster_vocabulary < spec.keywords_per_action) {
    throw FormatError("corpus spec: 'cluster_vocabulary' must be >= keywords_per_action");
  }
  if (spec.shared_vocabulary < 1) throw FormatError("corpus spec: 'shared_vocabulary' must be >= 1");
  if (spec.body_length < 0) throw FormatError("corpus spec: 'body_length' must be >= 0");
  if (spec.shared_fraction < 0.0 || spec.shared_fraction > 1.0) {
    throw FormatError("corpus spec: 'shared_fraction' must lie in [0, 1]");
  }
  return spec;
}

nlohmann::json to_json(const CorpusSpec& spec) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : spec.clusters) clusters.push_back({{"name", c.name}, {"actions", c.actions}});
  nlohmann::json mix = nlohmann::json::object();
  for (int b = 0; b < kBloomLevels; ++b) {
    mix[std::string(bloom_name(static_cast<Bloom>(b)))] = spec.bloom_mix[static_cast<std::size_t>(b)];
  }
  return {{"clusters", clusters},
          {"bloom_mix", mix},
          {"cluster_vocabulary", spec.cluster_vocabulary},
          {"shared_vocabulary", spec.shared_vocabulary},
          {"keywords_per_action", spec.keywords_per_action},
          {"body_length", spec.body_length},
          {"shared_fraction", spec.shared_fraction}};
}

std::vector<LearningAction> generate_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  std::set<std::string> taken;
  Rng shared_rng = Rng::derive({seed, 0xc0de});
  const std::vector<std::string> shared = vocabulary(shared_rng, "", spec.shared_vocabulary, taken);
  const std::vector<double> mix(spec.bloom_mix.begin(), spec.bloom_mix.end());

  std::vector<LearningAction> out;
  for (std::size_t ci = 0; ci < spec.clusters.size(); ++ci) {
    const ClusterSpec& cluster = spec.clusters[ci];
    Rng rng = Rng::derive({seed, 0xc1u, ci});
    const std::vector<std::string> vocab =
        vocabulary(rng, cluster.name.substr(0, 3), spec.cluster_vocabulary, taken);
    for (int a = 0; a < cluster.actions; ++a) {
      LearningAction act;
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%03d", cluster.name.c_str(), a + 1);
      act.id = id;
      act.topic = cluster.name;
      act.bloom = static_cast<Bloom>(rng.categorical(mix));

      std::vector<std::string> pool = vocab;
      rng.shuffle(pool);
      pool.resize(static_cast<std::size_t>(spec.keywords_per_action));
      act.keywords = TokenSet(pool.begin(), pool.end());

      for (int t = 0; t < spec.body_length; ++t) {
        if (rng.bernoulli(spec.shared_fraction)) {
          act.body_tokens.push_back(shared[rng.uniform_int(0, static_cast<std::int64_t>(shared.size()) - 1)]);
        } else {
          act.body_tokens.push_back(vocab[rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1)]);
        }
      }
      act.title = cluster.name + ": " + pool.front() + " (" + std::string(bloom_name(act.bloom)) + ")";
      act.summary = std::string(bloom_name(act.bloom)) + " activity on " + pool.front();
      for (std::size_t k = 1; k < pool.size(); ++k) act.summary += ", " + pool[k];
      out.push_back(std::move(act));
    }
  }
  return out;
}

}  // namespace pxplore
