#include "pxplore/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pxplore/error.hpp"
#include "pxplore/rng.hpp"

namespace pxplore {

namespace {

constexpr std::array<std::string_view, kDimensions> kDescriptionPrefix = {
    "Build lasting mastery of", "Complete short practice on", "Curious about",
    "Explicitly asked to learn"};
constexpr std::array<std::string_view, kDimensions> kMetricNames = {
    "mastery_score", "exercise_completion", "curiosity_signal", "stated_interest"};
constexpr std::array<std::string_view, 4> kFillerWords = {"how", "why", "please", "again"};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string join_tokens(const TokenSet& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ", ";
    out += t;
  }
  return out;
}

// Applies one action to one component. Returns the progress change.
double advance(const ComponentAffinity& aff, const LearningAction& action, double& progress) {
  const double before = progress;
  const double delta = affinity_matches(aff, action)
                           ? aff.progress_increment_match
                           : aff.progress_increment_miss - aff.regression_rate;
  progress = clamp01(progress + delta);
  return progress - before;
}

void apply_update(StateComponent& c, const ComponentAffinity& aff, double progress,
                  double change) {
  c.status = progress >= c.threshold ? ComponentStatus::kAligned : ComponentStatus::kNotAligned;
  c.confidence = clamp01(c.confidence + aff.confidence_drift * change);
}

std::map<std::string, std::vector<std::string>> topic_pools(const KnowledgeCorpus& corpus) {
  std::map<std::string, std::set<std::string>> pools;
  for (const auto& [id, a] : corpus.actions()) {
    const std::string& topic = a.topic.empty() ? a.id : a.topic;
    pools[topic].insert(a.keywords.begin(), a.keywords.end());
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [topic, set] : pools) out[topic] = std::vector<std::string>(set.begin(), set.end());
  return out;
}

TokenSet sample_tokens(const std::vector<std::string>& pool, int count, Rng& rng) {
  std::vector<std::string> shuffled = pool;
  rng.shuffle(shuffled);
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(count), shuffled.size());
  return TokenSet(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n));
}

int count_for(double mean, Rng& rng) {
  const double base = std::floor(mean);
  return static_cast<int>(base) + (rng.bernoulli(mean - base) ? 1 : 0);
}

}  // namespace

int SimLearner::session_turns() const {
  int turns = 0;
  for (const auto& s : session) turns += s.turns;
  return turns;
}

bool affinity_matches(const ComponentAffinity& affinity, const LearningAction& action) {
  if (bloom_distance(action.bloom, affinity.bloom_target) > 1) return false;
  for (const auto& k : action.keywords) {
    if (affinity.keyword_targets.count(k) != 0) return true;
  }
  return false;
}

StepResult step(const SimLearner& sim, const KnowledgeCorpus& corpus,
                const std::string& action_id) {
  if (!corpus.contains(action_id)) throw InvalidArgument("step: unknown action id " + action_id);
  return step(sim, corpus.at(action_id));
}

StepResult step(const SimLearner& sim, const LearningAction& action) {
  StepResult out;
  SimLearner& next = out.learner;
  next = sim;
  next.state = sim.state.successor();
  Rng rng = Rng::derive({sim.rng_seed, static_cast<std::uint64_t>(sim.state.timestep()),
                         fnv1a64(action.id)});

  const int turns = 2 + rng.binomial(6, 0.5);
  const int first_turn = sim.session_turns();
  int matched = 0;
  double gain = 0.0;
  std::vector<std::string> flipped;

  for (const auto& [id, c] : sim.state.components()) {
    const ComponentAffinity& aff = sim.affinities.at(id);
    double& progress = next.hidden_progress.at(id);
    const double change = advance(aff, action, progress);
    if (affinity_matches(aff, action)) ++matched;
    gain += change;
    StateComponent& nc = next.state.mutable_component(id);
    apply_update(nc, aff, progress, change);
    if (nc.aligned() && !c.aligned()) flipped.push_back(id);
  }

  // Latent components whose trigger appears in this action join the state.
  std::vector<LatentComponent> still_latent;
  for (const auto& lat : sim.latent) {
    if (action.keywords.count(lat.trigger) == 0) {
      still_latent.push_back(lat);
      continue;
    }
    StateComponent c = lat.component;
    c.status = ComponentStatus::kNotAligned;
    double progress = lat.initial_progress;
    const double change = advance(lat.affinity, action, progress);
    if (affinity_matches(lat.affinity, action)) ++matched;
    gain += change;
    apply_update(c, lat.affinity, progress, change);
    c.evidence.push_back({first_turn, "I had not thought about " + lat.trigger + " before"});
    if (c.aligned()) flipped.push_back(c.id);
    next.hidden_progress[c.id] = progress;
    next.affinities[c.id] = lat.affinity;
    next.state.add_component(std::move(c));
  }
  next.latent = std::move(still_latent);

  for (const auto& id : flipped) {
    next.state.mutable_component(id).evidence.push_back(
        {first_turn + turns - 1, "I can now handle " + action.title});
  }

  const double total = static_cast<double>(std::max<std::size_t>(next.state.size(), 1));
  const double match_fraction = static_cast<double>(matched) / total;
  const double mean_gain = gain / total;

  InteractionSummary& summary = out.summary;
  summary.turns = turns;
  summary.dwell_seconds = 90.0 + 420.0 * match_fraction + rng.uniform(0.0, 60.0);
  summary.revisits = rng.binomial(3, 0.15 + 0.3 * (1.0 - match_fraction));
  summary.quiz_total = 3 + static_cast<int>(rng.uniform_int(0, 2));
  summary.quiz_correct =
      rng.binomial(summary.quiz_total, std::clamp(sim.quiz_skill + 0.5 * mean_gain, 0.02, 0.98));
  for (const auto& k : action.keywords) summary.message_tokens[k] += 1.0;
  for (const auto& [id, c] : next.state.components()) {
    if (c.aligned()) continue;
    for (const auto& t : next.affinities.at(id).keyword_targets) {
      if (rng.bernoulli(0.25)) summary.message_tokens[t] += 1.0;
    }
  }
  summary.message_tokens[std::string(kFillerWords[rng.uniform_int(0, 3)])] += 1.0;

  next.session.push_back(summary);
  next.history.push_back(action.id);
  out.state = next.state;
  return out;
}

std::vector<SimLearner> spawn_population(const SimPopulationConfig& config, int n,
                                         std::uint64_t seed, const KnowledgeCorpus& corpus) {
  if (n < 1) throw InvalidArgument("spawn_population: n must be >= 1");
  if (corpus.empty()) throw InvalidArgument("spawn_population: empty corpus");
  const auto pools = topic_pools(corpus);
  std::vector<std::string> topics;
  for (const auto& [t, p] : pools) topics.push_back(t);

  std::vector<SimLearner> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::derive({seed, 0x5eed'0001ULL, static_cast<std::uint64_t>(i)});
    SimLearner L;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "L%04d", i);
    L.learner_id = buf;
    L.rng_seed = mix_seed({seed, static_cast<std::uint64_t>(i)});

    const std::size_t tier = rng.categorical(
        std::vector<double>(config.tier_weights.begin(), config.tier_weights.end()));
    L.quiz_skill = config.tier_quiz_skill[tier];
    const int anchor_bloom = static_cast<int>(tier) + 1;

    std::vector<std::string> focus = topics;
    rng.shuffle(focus);
    focus.resize(std::min<std::size_t>(focus.size(),
                                       static_cast<std::size_t>(std::max(1, config.focus_topics))));

    auto make_component = [&](Dimension dim, const std::string& id,
                              const std::vector<std::string>& pool) {
      StateComponent c;
      c.id = id;
      c.dimension = dim;
      const TokenSet targets = sample_tokens(pool, config.targets_per_component, rng);
      c.description = std::string(kDescriptionPrefix[static_cast<std::size_t>(dim)]) + " " +
                      join_tokens(targets);
      c.metric_name = std::string(kMetricNames[static_cast<std::size_t>(dim)]);
      c.threshold = rng.uniform(config.threshold_min, config.threshold_max);
      c.confidence = rng.uniform(config.confidence_min, config.confidence_max);
      ComponentAffinity aff;
      aff.component_id = id;
      aff.keyword_targets = targets;
      int bloom = anchor_bloom;
      if (rng.bernoulli(config.bloom_jitter)) bloom += rng.bernoulli(0.5) ? 1 : -1;
      aff.bloom_target = static_cast<Bloom>(std::clamp(bloom, 0, kBloomLevels - 1));
      aff.progress_increment_match =
          rng.uniform(config.increment_match_min, config.increment_match_max);
      aff.progress_increment_miss = rng.uniform(0.0, config.increment_miss_max);
      aff.regression_rate =
          std::min(rng.uniform(0.0, config.regression_max), 0.5 * aff.progress_increment_match);
      aff.confidence_drift = rng.uniform(0.0, config.drift_max);
      const double progress = rng.uniform(0.0, std::max(0.0, c.threshold - 0.05));
      return std::make_tuple(std::move(c), std::move(aff), progress);
    };

    std::vector<StateComponent> comps;
    int serial = 0;
    for (Dimension dim : kAllDimensions) {
      const int count = count_for(config.components_per_session[static_cast<std::size_t>(dim)], rng);
      for (int j = 0; j < count; ++j) {
        const std::string& topic = focus[rng.uniform_int(0, static_cast<std::int64_t>(focus.size()) - 1)];
        const std::string id = std::string(dimension_code(dim)) + "-" + std::to_string(++serial);
        auto [c, aff, progress] = make_component(dim, id, pools.at(topic));
        L.hidden_progress[id] = progress;
        L.affinities[id] = std::move(aff);
        comps.push_back(std::move(c));
      }
    }
    for (int j = 0; j < config.latent_per_learner; ++j) {
      const std::string& topic = topics[rng.uniform_int(0, static_cast<std::int64_t>(topics.size()) - 1)];
      const Dimension dim = kAllDimensions[rng.categorical(std::vector<double>(
          config.components_per_session.begin(), config.components_per_session.end()))];
      const std::string id = std::string(dimension_code(dim)) + "-" + std::to_string(++serial);
      auto [c, aff, progress] = make_component(dim, id, pools.at(topic));
      LatentComponent lat;
      lat.trigger = *aff.keyword_targets.begin();
      lat.initial_progress = progress;
      lat.component = std::move(c);
      lat.affinity = std::move(aff);
      L.latent.push_back(std::move(lat));
    }

    // Pre-path session: the learner talks about their goals and takes quizzes.
    for (int s = 0; s < config.initial_summaries; ++s) {
      InteractionSummary sum;
      sum.turns = 3 + static_cast<int>(rng.uniform_int(0, 5));
      sum.dwell_seconds = rng.uniform(60.0, 540.0);
      sum.revisits = static_cast<int>(rng.uniform_int(0, 4));
      sum.quiz_total = 3 + static_cast<int>(rng.uniform_int(0, 2));
      sum.quiz_correct = rng.binomial(sum.quiz_total, L.quiz_skill);
      for (const auto& [id, aff] : L.affinities) {
        for (const auto& t : aff.keyword_targets) {
          if (rng.bernoulli(0.5)) sum.message_tokens[t] += 1.0;
        }
      }
      sum.message_tokens[std::string(kFillerWords[rng.uniform_int(0, 3)])] += 1.0;
      L.session.push_back(std::move(sum));
    }
    const int turns = L.session_turns();
    for (auto& c : comps) {
      const auto& targets = L.affinities.at(c.id).keyword_targets;
      c.evidence.push_back({static_cast<int>(rng.uniform_int(0, turns - 1)),
                            "I want to get better at " + *targets.begin()});
    }
    L.state = new_state(std::move(comps));
    out.push_back(std::move(L));
  }
  return out;
}

double lookahead_value(const SimLearner& learner, const KnowledgeCorpus& corpus,
                       const std::string& first, const std::vector<std::string>& pool,
                       int depth, double gamma, const RewardWeights& weights) {
  const StepResult r = step(learner, corpus, first);
  const double reward = compute_reward(learner.state, r.state, weights).total;
  if (depth <= 1) return reward;
  double best_tail = 0.0;
  bool any = false;
  for (const auto& next : pool) {
    if (std::find(r.learner.history.begin(), r.learner.history.end(), next) !=
        r.learner.history.end()) {
      continue;
    }
    const double v = lookahead_value(r.learner, corpus, next, pool, depth - 1, gamma, weights);
    if (!any || v > best_tail) best_tail = v;
    any = true;
  }
  return reward + gamma * best_tail;
}

double progress_gain(const SimLearner& learner, const KnowledgeCorpus& corpus,
                     const std::string& action_id) {
  const StepResult r = step(learner, corpus, action_id);
  double gain = 0.0;
  for (const auto& [id, c] : learner.state.components()) {
    if (c.aligned()) continue;
    gain += c.confidence * std::max(0.0, r.learner.hidden_progress.at(id) - learner.hidden_progress.at(id));
  }
  return gain;
}

std::pair<int, int> split_sizes(int n) {
  if (n < 2) return {n, 0};
  const int test = std::max(1, static_cast<int>(std::lround(n / 6.0)));
  return {n - test, test};
}

std::vector<ExpertRecord> generate_expert_dataset(const std::vector<SimLearner>& population,
                                                  const KnowledgeCorpus& corpus,
                                                  const ExpertConfig& config, std::uint64_t seed) {
  if (config.lookahead < 1) throw InvalidArgument("lookahead must be >= 1");
  if (corpus.empty()) throw InvalidArgument("generate_expert_dataset: empty corpus");

  std::vector<ExpertRecord> records;
  for (const auto& learner : population) {
    ExpertRecord rec;
    rec.learner_id = learner.learner_id;
    rec.state = learner.state;
    rec.profile = build_profile(learner.session, session_keywords(learner.session), config.profiler);
    rec.profile_query = profile_query(rec.profile);
    const CandidateSet cands =
        retrieve(rec.profile_query, corpus, learner.history, config.retrieval);
    if (cands.empty()) continue;  // nothing left to recommend for this learner
    rec.candidates = cands.ids();
    double best_value = -std::numeric_limits<double>::infinity();
    double best_gain = 0.0;
    for (const auto& id : rec.candidates) {
      const double v = lookahead_value(learner, corpus, id, rec.candidates, config.lookahead,
                                       config.gamma, config.weights);
      rec.lookahead_values[id] = v;
      const double g = progress_gain(learner, corpus, id);
      if (v > best_value || (v == best_value && g > best_gain) ||
          (v == best_value && g == best_gain && id < rec.best)) {
        best_value = v;
        best_gain = g;
        rec.best = id;
      }
    }
    const double cutoff = best_value - (1.0 - config.acceptable_band) * std::abs(best_value);
    for (const auto& id : rec.candidates) {
      if (id == rec.best) {
        rec.grades[id] = 2;
      } else {
        rec.grades[id] = rec.lookahead_values[id] >= cutoff ? 1 : 0;
      }
    }
    records.push_back(std::move(rec));
  }

  const auto [n_train, n_test] = split_sizes(static_cast<int>(records.size()));
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng::derive({seed, 0x5b17ULL});
  rng.shuffle(order);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    records[order[pos]].split = static_cast<int>(pos) < n_train ? "train" : "test";
  }
  return records;
}

DatasetStats dataset_stats(const std::vector<ExpertRecord>& records,
                           const std::vector<SimLearner>& population) {
  std::map<std::string, int> turns;
  for (const auto& l : population) turns[l.learner_id] = l.session_turns();
  DatasetStats stats;
  for (const auto& r : records) {
    DatasetStats::Row& row = r.split == "train" ? stats.train : stats.test;
    for (DatasetStats::Row* target : {&row, &stats.total}) {
      target->sessions += 1;
      auto it = turns.find(r.learner_id);
      target->interactions += it == turns.end() ? 0 : it->second;
      for (const auto& [id, c] : r.state.components()) {
        target->components[static_cast<std::size_t>(c.dimension)] += 1;
      }
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const ExpertRecord& r) {
  return {{"learner_id", r.learner_id},
          {"split", r.split},
          {"state", to_json(r.state)},
          {"profile", to_json(r.profile)},
          {"profile_query", r.profile_query},
          {"candidates", r.candidates},
          {"best", r.best},
          {"grades", r.grades},
          {"lookahead_values", r.lookahead_values}};
}

ExpertRecord expert_record_from_json(const nlohmann::json& j) {
  try {
    ExpertRecord r;
    r.learner_id = j.value("learner_id", "");
    r.split = j.at("split").get<std::string>();
    r.state = state_from_json(j.at("state"));
    r.profile = profile_from_json(j.at("profile"));
    r.profile_query = j.at("profile_query").get<TokenBag>();
    r.candidates = j.at("candidates").get<std::vector<std::string>>();
    r.best = j.at("best").get<std::string>();
    r.grades = j.at("grades").get<std::map<std::string, int>>();
    r.lookahead_values = j.value("lookahead_values", std::map<std::string, double>{});
    if (std::find(r.candidates.begin(), r.candidates.end(), r.best) == r.candidates.end()) {
      throw FormatError("record " + r.learner_id + ": best action not among candidates");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("expert record: ") + e.what());
  }
}

namespace {

nlohmann::json affinity_json(const ComponentAffinity& a) {
  return {{"component_id", a.component_id},
          {"keyword_targets", std::vector<std::string>(a.keyword_targets.begin(),
                                                       a.keyword_targets.end())},
          {"bloom_target", bloom_name(a.bloom_target)},
          {"progress_increment_match", a.progress_increment_match},
          {"progress_increment_miss", a.progress_increment_miss},
          {"regression_rate", a.regression_rate},
          {"confidence_drift", a.confidence_drift}};
}

ComponentAffinity affinity_from_json(const nlohmann::json& j) {
  ComponentAffinity a;
  a.component_id = j.at("component_id").get<std::string>();
  for (const auto& t : j.at("keyword_targets")) a.keyword_targets.insert(t.get<std::string>());
  const auto bloom = parse_bloom(j.at("bloom_target").get<std::string>());
  if (!bloom) throw FormatError("affinity: bad bloom_target");
  a.bloom_target = *bloom;
  a.progress_increment_match = j.at("progress_increment_match").get<double>();
  a.progress_increment_miss = j.at("progress_increment_miss").get<double>();
  a.regression_rate = j.at("regression_rate").get<double>();
  a.confidence_drift = j.at("confidence_drift").get<double>();
  return a;
}

}  // namespace

nlohmann::json to_json(const SimLearner& s) {
  nlohmann::json affs = nlohmann::json::array();
  for (const auto& [id, a] : s.affinities) affs.push_back(affinity_json(a));
  nlohmann::json latent = nlohmann::json::array();
  for (const auto& l : s.latent) {
    LearnerState holder = new_state({l.component});
    latent.push_back({{"component", to_json(holder)["components"][0]},
                      {"affinity", affinity_json(l.affinity)},
                      {"trigger", l.trigger},
                      {"initial_progress", l.initial_progress}});
  }
  nlohmann::json session = nlohmann::json::array();
  for (const auto& x : s.session) session.push_back(to_json(x));
  return {{"learner_id", s.learner_id},
          {"state", to_json(s.state)},
          {"hidden_progress", s.hidden_progress},
          {"affinities", std::move(affs)},
          {"latent", std::move(latent)},
          {"rng_seed", s.rng_seed},
          {"quiz_skill", s.quiz_skill},
          {"session", std::move(session)},
          {"history", s.history}};
}

SimLearner sim_learner_from_json(const nlohmann::json& j) {
  try {
    SimLearner s;
    s.learner_id = j.at("learner_id").get<std::string>();
    s.state = state_from_json(j.at("state"));
    s.hidden_progress = j.at("hidden_progress").get<std::map<std::string, double>>();
    for (const auto& ja : j.at("affinities")) {
      ComponentAffinity a = affinity_from_json(ja);
      s.affinities[a.component_id] = std::move(a);
    }
    for (const auto& jl : j.value("latent", nlohmann::json::array())) {
      LatentComponent l;
      nlohmann::json holder = {{"timestep", 0}, {"components", {jl.at("component")}}};
      l.component = state_from_json(holder).components().begin()->second;
      l.affinity = affinity_from_json(jl.at("affinity"));
      l.trigger = jl.at("trigger").get<std::string>();
      l.initial_progress = jl.at("initial_progress").get<double>();
      s.latent.push_back(std::move(l));
    }
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    s.quiz_skill = j.at("quiz_skill").get<double>();
    for (const auto& js : j.value("session", nlohmann::json::array())) {
      s.session.push_back(interaction_from_json(js));
    }
    s.history = j.value("history", std::vector<std::string>{});
    for (const auto& [id, c] : s.state.components()) {
      if (s.hidden_progress.count(id) == 0 || s.affinities.count(id) == 0) {
        throw FormatError("learner " + s.learner_id + ": component " + id + " lacks progress");
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("sim learner: ") + e.what());
  }
}

nlohmann::json to_json(const SimPopulationConfig& c) {
  return {{"components_per_session", c.components_per_session},
          {"latent_per_learner", c.latent_per_learner},
          {"focus_topics", c.focus_topics},
          {"targets_per_component", c.targets_per_component},
          {"tier_weights", c.tier_weights},
          {"tier_quiz_skill", c.tier_quiz_skill},
          {"bloom_jitter", c.bloom_jitter},
          {"threshold_min", c.threshold_min},
          {"threshold_max", c.threshold_max},
          {"increment_match_min", c.increment_match_min},
          {"increment_match_max", c.increment_match_max},
          {"increment_miss_max", c.increment_miss_max},
          {"regression_max", c.regression_max},
          {"confidence_min", c.confidence_min},
          {"confidence_max", c.confidence_max},
          {"drift_max", c.drift_max},
          {"initial_summaries", c.initial_summaries}};
}

SimPopulationConfig population_config_from_json(const nlohmann::json& j) {
  SimPopulationConfig c;
  try {
    c.components_per_session = j.value("components_per_session", c.components_per_session);
    c.latent_per_learner = j.value("latent_per_learner", c.latent_per_learner);
    c.focus_topics = j.value("focus_topics", c.focus_topics);
    c.targets_per_component = j.value("targets_per_component", c.targets_per_component);
    c.tier_weights = j.value("tier_weights", c.tier_weights);
    c.tier_quiz_skill = j.value("tier_quiz_skill", c.tier_quiz_skill);
    c.bloom_jitter = j.value("bloom_jitter", c.bloom_jitter);
    c.threshold_min = j.value("threshold_min", c.threshold_min);
    c.threshold_max = j.value("threshold_max", c.threshold_max);
    c.increment_match_min = j.value("increment_match_min", c.increment_match_min);
    c.increment_match_max = j.value("increment_match_max", c.increment_match_max);
    c.increment_miss_max = j.value("increment_miss_max", c.increment_miss_max);
    c.regression_max = j.value("regression_max", c.regression_max);
    c.confidence_min = j.value("confidence_min", c.confidence_min);
    c.confidence_max = j.value("confidence_max", c.confidence_max);
    c.drift_max = j.value("drift_max", c.drift_max);
    c.initial_summaries = j.value("initial_summaries", c.initial_summaries);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("population config: ") + e.what());
  }
  if (c.increment_match_min <= 0.0 || c.increment_match_max > 1.0 ||
      c.increment_match_min > c.increment_match_max || c.threshold_min < 0.0 ||
      c.threshold_max > 1.0 || c.initial_summaries < 1) {
    throw FormatError("population config: parameter out of range");
  }
  return c;
}

nlohmann::json to_json(const DatasetStats& s) {
  auto row = [](const DatasetStats::Row& r) {
    return nlohmann::json{{"sessions", r.sessions},
                          {"interactions", r.interactions},
                          {"O_L", r.components[0]},
                          {"O_S", r.components[1]},
                          {"M_I", r.components[2]},
                          {"M_E", r.components[3]}};
  };
  return {{"train", row(s.train)}, {"test", row(s.test)}, {"total", row(s.total)}};
}

}  // namespace pxplore
