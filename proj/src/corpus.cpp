#include "pxplore/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pxplore/error.hpp"
#include "pxplore/simd.hpp"

namespace pxplore {

namespace {

void normalize(EmbeddingVector& v) {
  const double norm = std::sqrt(simd::sum_squares(v));
  if (norm == 0.0) return;
  for (double& x : v) x /= norm;
}

TokenList index_document(const LearningAction& a) {
  TokenList doc = a.body_tokens;
  for (int rep = 0; rep < 2; ++rep) doc.insert(doc.end(), a.keywords.begin(), a.keywords.end());
  return doc;
}

}  // namespace

KnowledgeCorpus::KnowledgeCorpus(std::vector<LearningAction> actions) {
  insert_all(std::move(actions));
}

void KnowledgeCorpus::insert(LearningAction action) {
  if (action.keywords.empty()) throw InvalidArgument("action " + action.id + " has no keywords");
  std::string id = action.id;
  actions_.insert_or_assign(std::move(id), std::move(action));
  rebuild();
}

void KnowledgeCorpus::insert_all(std::vector<LearningAction> actions) {
  for (auto& a : actions) {
    if (a.keywords.empty()) throw InvalidArgument("action " + a.id + " has no keywords");
    std::string id = a.id;
    actions_.insert_or_assign(std::move(id), std::move(a));
  }
  rebuild();
}

void KnowledgeCorpus::rebuild() {
  df_.clear();
  documents_.clear();
  tf_.clear();
  embeddings_.clear();
  double total_len = 0.0;
  for (const auto& [id, a] : actions_) {
    TokenList doc = index_document(a);
    total_len += static_cast<double>(doc.size());
    for (const auto& t : set_of(doc)) ++df_[t];
    tf_[id] = bag_of(doc);
    documents_[id] = std::move(doc);
  }
  avgdl_ = actions_.empty() ? 0.0 : total_len / static_cast<double>(actions_.size());
  for (const auto& [id, bag] : tf_) embeddings_[id] = embed(bag, this);
}

const LearningAction& KnowledgeCorpus::at(const std::string& id) const {
  auto it = actions_.find(id);
  if (it == actions_.end()) throw InvalidArgument("unknown action id: " + id);
  return it->second;
}

std::size_t KnowledgeCorpus::document_frequency(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

double KnowledgeCorpus::idf(const std::string& token) const {
  const double n = static_cast<double>(actions_.size());
  const double df = static_cast<double>(document_frequency(token));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double KnowledgeCorpus::embedding_idf(const std::string& token) const {
  const double n = static_cast<double>(actions_.size());
  const double df = static_cast<double>(document_frequency(token));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

const TokenList& KnowledgeCorpus::document(const std::string& id) const {
  auto it = documents_.find(id);
  if (it == documents_.end()) throw InvalidArgument("unknown action id: " + id);
  return it->second;
}

const TokenBag& KnowledgeCorpus::term_frequencies(const std::string& id) const {
  auto it = tf_.find(id);
  if (it == tf_.end()) throw InvalidArgument("unknown action id: " + id);
  return it->second;
}

const EmbeddingVector& KnowledgeCorpus::embedding(const std::string& id) const {
  auto it = embeddings_.find(id);
  if (it == embeddings_.end()) throw InvalidArgument("unknown action id: " + id);
  return it->second;
}

double bm25_score(const TokenBag& query, const LearningAction& action,
                  const KnowledgeCorpus& corpus, const Bm25Params& params) {
  const TokenBag& tf = corpus.term_frequencies(action.id);
  const double dl = static_cast<double>(corpus.document(action.id).size());
  const double avgdl = corpus.avgdl() > 0.0 ? corpus.avgdl() : 1.0;
  const double norm = params.k1 * (1.0 - params.b + params.b * dl / avgdl);
  double score = 0.0;
  for (const auto& [term, qw] : query) {
    auto it = tf.find(term);
    if (it == tf.end() || qw <= 0.0) continue;
    const double f = it->second;
    score += qw * corpus.idf(term) * f * (params.k1 + 1.0) / (f + norm);
  }
  return score;
}

EmbeddingVector embed(const TokenBag& text, const KnowledgeCorpus* corpus) {
  EmbeddingVector v{};
  for (const auto& [token, weight] : text) {
    const double idf = corpus != nullptr ? corpus->embedding_idf(token) : 1.0;
    v[fnv1a64(token) % kEmbeddingDim] += weight * idf;
  }
  normalize(v);
  return v;
}

EmbeddingVector embed(const TokenList& text, const KnowledgeCorpus* corpus) {
  return embed(bag_of(text), corpus);
}

double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double na = simd::sum_squares(a);
  const double nb = simd::sum_squares(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = simd::dot(a, b) / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double hybrid_score(double bm25_norm, double cosine, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha outside [0,1]");
  return alpha * bm25_norm + (1.0 - alpha) * std::max(cosine, 0.0);
}

std::vector<ScoredAction> score_pool(const TokenBag& query, const KnowledgeCorpus& corpus,
                                     std::span<const std::string> pool, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha outside [0,1]");
  const EmbeddingVector q = embed(query, &corpus);
  std::vector<ScoredAction> out;
  out.reserve(pool.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& id : pool) {
    ScoredAction s;
    s.id = id;
    s.bm25_raw = bm25_score(query, corpus.at(id), corpus);
    s.cosine = cosine_sim(q, corpus.embedding(id));
    lo = std::min(lo, s.bm25_raw);
    hi = std::max(hi, s.bm25_raw);
    out.push_back(std::move(s));
  }
  for (auto& s : out) {
    s.bm25_norm = hi > lo ? (s.bm25_raw - lo) / (hi - lo) : 0.0;
    s.score = hybrid_score(s.bm25_norm, s.cosine, alpha);
  }
  return out;
}

std::vector<std::string> CandidateSet::ids() const {
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(r.id);
  return out;
}

CandidateSet retrieve(const TokenBag& query, const KnowledgeCorpus& corpus,
                      std::span<const std::string> history, const RetrievalConfig& config) {
  if (config.k < 1) throw InvalidArgument("retrieve: k must be >= 1");
  const std::set<std::string> taken(history.begin(), history.end());
  std::vector<std::string> pool;
  pool.reserve(corpus.size());
  for (const auto& [id, a] : corpus.actions()) {
    if (taken.count(id) == 0) pool.push_back(id);
  }
  CandidateSet out;
  out.k = config.k;
  out.ranked = score_pool(query, corpus, pool, config.alpha);
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const ScoredAction& a, const ScoredAction& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.id < b.id;
                   });
  if (out.ranked.size() > config.k) out.ranked.resize(config.k);
  return out;
}

nlohmann::json to_json(const KnowledgeCorpus& corpus) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [id, a] : corpus.actions()) {
    std::string body;
    for (const auto& t : a.body_tokens) {
      if (!body.empty()) body.push_back(' ');
      body += t;
    }
    nlohmann::json j = {{"id", a.id},
                        {"title", a.title},
                        {"summary", a.summary},
                        {"keywords", std::vector<std::string>(a.keywords.begin(), a.keywords.end())},
                        {"bloom", bloom_name(a.bloom)},
                        {"body", body}};
    if (!a.topic.empty()) j["topic"] = a.topic;
    arr.push_back(std::move(j));
  }
  return arr;
}

KnowledgeCorpus corpus_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("corpus: expected a JSON array of actions");
  std::vector<LearningAction> actions;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& ja = j[i];
    const std::string where = "corpus[" + std::to_string(i) + "]";
    try {
      LearningAction a;
      a.id = ja.at("id").get<std::string>();
      if (!seen.insert(a.id).second) throw FormatError(where + ": duplicate id " + a.id);
      a.title = ja.value("title", "");
      a.summary = ja.value("summary", "");
      for (const auto& k : ja.at("keywords")) {
        for (auto& t : tokenize(k.get<std::string>())) a.keywords.insert(std::move(t));
      }
      if (a.keywords.empty()) throw FormatError(where + ": keywords must be non-empty");
      const auto& jb = ja.at("bloom");
      std::optional<Bloom> bloom;
      if (jb.is_number_integer()) {
        const int level = jb.get<int>();
        if (level >= 0 && level < kBloomLevels) bloom = static_cast<Bloom>(level);
      } else {
        bloom = parse_bloom(jb.get<std::string>());
      }
      if (!bloom) throw FormatError(where + ": unknown bloom level");
      a.bloom = *bloom;
      a.body_tokens = tokenize(ja.value("body", ""));
      a.topic = ja.value("topic", "");
      actions.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return KnowledgeCorpus(std::move(actions));
}

nlohmann::json to_json(const CandidateSet& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : c.ranked) {
    arr.push_back({{"id", r.id},
                   {"score", r.score},
                   {"bm25", r.bm25_raw},
                   {"bm25_norm", r.bm25_norm},
                   {"cosine", r.cosine}});
  }
  return arr;
}

}  // namespace pxplore
