#pragma once
// Deterministic simulated learner standing in for the LLM state evaluator,
// plus synthetic population and expert-dataset generators.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pxplore/bloom.hpp"
#include "pxplore/corpus.hpp"
#include "pxplore/interaction.hpp"
#include "pxplore/profiler.hpp"
#include "pxplore/reward.hpp"
#include "pxplore/state.hpp"

namespace pxplore {

struct ComponentAffinity {
  std::string component_id;
  TokenSet keyword_targets;
  Bloom bloom_target = Bloom::kUnderstanding;
  double progress_increment_match = 0.3;  // (0, 1]
  double progress_increment_miss = 0.0;   // [0, 1)
  double regression_rate = 0.0;           // [0, 1), < progress_increment_match
  double confidence_drift = 0.0;

  bool operator==(const ComponentAffinity&) const = default;
};

// A component that joins the state the first time an action carrying its
// trigger keyword is taken.
struct LatentComponent {
  StateComponent component;
  ComponentAffinity affinity;
  std::string trigger;
  double initial_progress = 0.0;

  bool operator==(const LatentComponent&) const = default;
};

struct SimLearner {
  std::string learner_id;
  LearnerState state;
  std::map<std::string, double> hidden_progress;
  std::map<std::string, ComponentAffinity> affinities;
  std::vector<LatentComponent> latent;
  std::uint64_t rng_seed = 0;
  double quiz_skill = 0.5;  // base probability of a correct quiz answer
  std::vector<InteractionSummary> session;
  std::vector<std::string> history;

  int session_turns() const;
  bool operator==(const SimLearner&) const = default;
};

struct StepResult {
  SimLearner learner;
  InteractionSummary summary;
  LearnerState state;
};

// Whether `action` advances the component described by `affinity`.
bool affinity_matches(const ComponentAffinity& affinity, const LearningAction& action);

// One transition. Throws InvalidArgument when action_id is not in corpus.
StepResult step(const SimLearner& sim, const KnowledgeCorpus& corpus, const std::string& action_id);
StepResult step(const SimLearner& sim, const LearningAction& action);

struct SimPopulationConfig {
  // Expected components per session for O_L, O_S, M_I, M_E (counts per
  // learner are floor(mean) + Bernoulli(frac(mean))).
  std::array<double, kDimensions> components_per_session{326.0 / 300, 401.0 / 300,
                                                         338.0 / 300, 350.0 / 300};
  int latent_per_learner = 1;
  int focus_topics = 2;
  int targets_per_component = 2;
  // Learner ability tiers: weight and quiz success probability; the tier's
  // Bloom level (Understanding, Applying, Analyzing) anchors component
  // Bloom targets.
  std::array<double, 3> tier_weights{0.3, 0.4, 0.3};
  std::array<double, 3> tier_quiz_skill{0.2, 0.5, 0.85};
  double bloom_jitter = 0.3;  // probability a target is one level off the tier
  double threshold_min = 0.4, threshold_max = 0.9;
  double increment_match_min = 0.2, increment_match_max = 0.45;
  double increment_miss_max = 0.02;
  double regression_max = 0.02;
  double confidence_min = 0.5, confidence_max = 0.95;
  double drift_max = 0.3;
  int initial_summaries = 3;
};

// Throws InvalidArgument for n < 1 or an empty corpus.
std::vector<SimLearner> spawn_population(const SimPopulationConfig& config, int n,
                                         std::uint64_t seed, const KnowledgeCorpus& corpus);

struct ExpertRecord {
  std::string learner_id;
  std::string split;  // "train" | "test"
  LearnerState state;
  LearnerProfile profile;
  TokenBag profile_query;
  std::vector<std::string> candidates;
  std::string best;
  std::map<std::string, int> grades;  // 2 best, 1 acceptable, 0 not suitable
  std::map<std::string, double> lookahead_values;
};

struct ExpertConfig {
  int lookahead = 2;
  double gamma = 0.9;
  double acceptable_band = 0.75;  // grade 1 when value >= band * best value
  RetrievalConfig retrieval;
  RewardWeights weights;
  ProfilerConfig profiler;
};

// Best achievable discounted reward over `depth` steps when the first action
// is `first` and later actions are distinct members of `pool`.
double lookahead_value(const SimLearner& learner, const KnowledgeCorpus& corpus,
                       const std::string& first, const std::vector<std::string>& pool,
                       int depth, double gamma, const RewardWeights& weights);

// Confidence-weighted hidden progress one action adds to the unaligned
// components.
double progress_gain(const SimLearner& learner, const KnowledgeCorpus& corpus,
                     const std::string& action_id);

// One record per learner; records with no candidates are skipped. The best
// action maximizes lookahead value; ties go to the larger progress gain, then
// the lower id. Splits test = max(1, round(n / 6)) learners (seeded shuffle)
// when n >= 2.
std::vector<ExpertRecord> generate_expert_dataset(const std::vector<SimLearner>& population,
                                                  const KnowledgeCorpus& corpus,
                                                  const ExpertConfig& config, std::uint64_t seed);

std::pair<int, int> split_sizes(int n);

struct DatasetStats {
  struct Row {
    int sessions = 0;
    int interactions = 0;
    std::array<int, kDimensions> components{};
  };
  Row train, test, total;
};

DatasetStats dataset_stats(const std::vector<ExpertRecord>& records,
                           const std::vector<SimLearner>& population);

nlohmann::json to_json(const ExpertRecord& r);
ExpertRecord expert_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimLearner& s);
SimLearner sim_learner_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimPopulationConfig& c);
SimPopulationConfig population_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetStats& s);

}  // namespace pxplore
