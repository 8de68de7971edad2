#pragma once
// Knowledge corpus of atomic learning actions and hybrid lexical + dense
// retrieval of the candidate action set.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/bloom.hpp"
#include "pxplore/text.hpp"

namespace pxplore {

struct LearningAction {
  std::string id;
  std::string title;
  std::string summary;
  TokenSet keywords;
  Bloom bloom = Bloom::kUnderstanding;
  TokenList body_tokens;
  // Optional grouping label written by the corpus generator; not used for
  // scoring.
  std::string topic;
};

inline constexpr std::size_t kEmbeddingDim = 256;
using EmbeddingVector = std::array<double, kEmbeddingDim>;

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Read-mostly collection. Statistics (df, avgdl, cached embeddings) are
// rebuilt on every mutation, so a const corpus is always consistent.
class KnowledgeCorpus {
 public:
  KnowledgeCorpus() = default;
  explicit KnowledgeCorpus(std::vector<LearningAction> actions);

  // Adds or replaces by id. Throws InvalidArgument on empty keywords.
  void insert(LearningAction action);
  void insert_all(std::vector<LearningAction> actions);

  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const std::map<std::string, LearningAction>& actions() const { return actions_; }
  const LearningAction& at(const std::string& id) const;
  bool contains(const std::string& id) const { return actions_.count(id) != 0; }

  double avgdl() const { return avgdl_; }
  std::size_t document_frequency(const std::string& token) const;
  std::size_t vocabulary_size() const { return df_.size(); }

  // Okapi idf: ln(1 + (N − df + 0.5)/(df + 0.5)).
  double idf(const std::string& token) const;
  // Smoothed idf used for embedding weights: ln((1 + N)/(1 + df)) + 1.
  double embedding_idf(const std::string& token) const;

  // Indexed document of an action: body tokens followed by keywords twice.
  const TokenList& document(const std::string& id) const;
  const TokenBag& term_frequencies(const std::string& id) const;
  const EmbeddingVector& embedding(const std::string& id) const;

 private:
  void rebuild();

  std::map<std::string, LearningAction> actions_;
  std::map<std::string, std::size_t> df_;
  std::map<std::string, TokenList> documents_;
  std::map<std::string, TokenBag> tf_;
  std::map<std::string, EmbeddingVector> embeddings_;
  double avgdl_ = 0.0;
};

double bm25_score(const TokenBag& query, const LearningAction& action,
                  const KnowledgeCorpus& corpus, const Bm25Params& params = {});

// Hashed TF-IDF: FNV-1a buckets, L2-normalized; zero vector for empty text.
// Without a corpus every idf is 1.
EmbeddingVector embed(const TokenBag& text, const KnowledgeCorpus* corpus = nullptr);
EmbeddingVector embed(const TokenList& text, const KnowledgeCorpus* corpus = nullptr);

// dot(a,b)/(|a||b|), 0 when either norm is 0.
double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b);

// α · bm25_norm + (1 − α) · max(cosine, 0). Throws for α outside [0, 1].
double hybrid_score(double bm25_norm, double cosine, double alpha);

struct ScoredAction {
  std::string id;
  double score = 0.0;
  double bm25_raw = 0.0;
  double bm25_norm = 0.0;
  double cosine = 0.0;
};

// Scores every id in `pool`, min–max normalizing raw BM25 across the pool
// (all-equal pools normalize to 0). Result is in pool order.
std::vector<ScoredAction> score_pool(const TokenBag& query, const KnowledgeCorpus& corpus,
                                     std::span<const std::string> pool, double alpha);

struct CandidateSet {
  std::vector<ScoredAction> ranked;  // descending score, ties by ascending id
  std::size_t k = 0;

  bool empty() const { return ranked.empty(); }
  std::size_t size() const { return ranked.size(); }
  std::vector<std::string> ids() const;
};

struct RetrievalConfig {
  double alpha = 0.2;
  std::size_t k = 10;
};

// Excludes `history`, scores the remaining actions and keeps the top k.
CandidateSet retrieve(const TokenBag& query, const KnowledgeCorpus& corpus,
                      std::span<const std::string> history,
                      const RetrievalConfig& config = {});

// [{"id","title","summary","keywords":[…],"bloom","body","topic"?}]
nlohmann::json to_json(const KnowledgeCorpus& corpus);
KnowledgeCorpus corpus_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CandidateSet& c);

}  // namespace pxplore
