#include <cmath>
#include <map>

#include "doctest.h"
#include "pxplore/corpus_gen.hpp"
#include "pxplore/error.hpp"
#include "pxplore/pipeline.hpp"
#include "pxplore/policy.hpp"
#include "support.hpp"

using namespace pxplore;
using namespace pxplore::testing;

namespace {

LearnerProfile profile_with(Persona persona, Bloom cognition, double engagement, TokenBag interest = {}) {
  LearnerProfile p;
  p.persona = persona;
  p.cognition = cognition;
  p.engagement = engagement;
  p.interest = std::move(interest);
  return p;
}

// Straight-line recomputation of the documented layout.
FeatureVector reference_features(const LearnerState& s, const LearnerProfile& p, const LearningAction& a) {
  FeatureVector f{};
  TokenSet goal;
  for (int d = 0; d < kDimensions; ++d) {
    int n = 0;
    double conf = 0.0;
    for (const auto& [id, c] : s.components()) {
      if (static_cast<int>(c.dimension) != d || c.aligned()) continue;
      ++n;
      conf += c.confidence;
      for (const auto& t : tokenize(c.description)) goal.insert(t);
    }
    f[static_cast<std::size_t>(d)] = n;
    f[static_cast<std::size_t>(4 + d)] = n == 0 ? 0.0 : conf / n;
  }
  for (const auto& [t, w] : p.interest) goal.insert(t);
  std::size_t inter = 0;
  for (const auto& k : a.keywords) inter += goal.count(k);
  const std::size_t uni = a.keywords.size() + goal.size() - inter;
  f[8] = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  f[9] = std::abs(static_cast<int>(a.bloom) - static_cast<int>(p.cognition));
  f[10 + static_cast<std::size_t>(p.persona)] = 1.0;
  f[14] = p.engagement;
  f[15] = 1.0;
  return f;
}

KnowledgeCorpus toy_corpus() {
  return KnowledgeCorpus({action("a1", {"alpha", "beta"}, Bloom::kApplying),
                          action("a2", {"gamma"}, Bloom::kRemembering),
                          action("a3", {"delta", "alpha"}, Bloom::kCreating),
                          action("a4", {"eps"}, Bloom::kApplying),
                          action("a5", {"zeta", "beta"}, Bloom::kAnalyzing)});
}

}  // namespace

TEST_CASE("featurize on an empty state") {
  const LearnerProfile p = profile_with(Persona::kExplorer, Bloom::kApplying, 0.4);
  const FeatureVector f = featurize(LearnerState{}, p, action("x", {"k"}, Bloom::kApplying));
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    if (i == 12 || i == 14 || i == 15) continue;
    CHECK(f[i] == 0.0);
  }
  CHECK(f[12] == 1.0);
  CHECK(f[14] == 0.4);
  CHECK(f[15] == 1.0);
}

TEST_CASE("identical keywords and interest give Jaccard 1") {
  const LearnerProfile p = profile_with(Persona::kExplorer, Bloom::kApplying, 0.4, {{"k1", 1.0}, {"k2", 3.0}});
  CHECK(featurize(LearnerState{}, p, action("x", {"k1", "k2"}))[kJaccardFeature] == 1.0);
}

TEST_CASE("featurize matches a straight-line recomputation") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<StateComponent, bool>> spec;
    const int n = static_cast<int>(rng.uniform_int(0, 7));
    for (int i = 0; i < n; ++i) {
      spec.push_back({component("c" + std::to_string(i), static_cast<Dimension>(rng.uniform_int(0, 3)), rng.uniform(),
                                "learn w" + std::to_string(rng.uniform_int(0, 9)) + " w" + std::to_string(rng.uniform_int(0, 9))),
                      rng.bernoulli(0.4)});
    }
    const LearnerState s = state_with(spec);
    TokenBag interest;
    for (int i = 0; i < rng.uniform_int(0, 5); ++i) interest["w" + std::to_string(rng.uniform_int(0, 12))] += 1.0;
    const LearnerProfile p = profile_with(static_cast<Persona>(rng.uniform_int(0, 3)),
                                          static_cast<Bloom>(rng.uniform_int(0, 5)), rng.uniform(), interest);
    const LearningAction a = action("a", {"w" + std::to_string(rng.uniform_int(0, 12)), "w" + std::to_string(rng.uniform_int(0, 12))},
                                    static_cast<Bloom>(rng.uniform_int(0, 5)));
    const FeatureVector got = featurize(s, p, a);
    const FeatureVector want = reference_features(s, p, a);
    for (std::size_t i = 0; i < kFeatureDim; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
    for (double x : got) CHECK(std::isfinite(x));
    const StateFeatureVector sf = state_features(s, p);
    for (std::size_t i = 0; i < 8; ++i) CHECK(sf[i] == got[i]);
    CHECK(sf[8] == 1.0);
  }
}

TEST_CASE("action distribution basics") {
  const KnowledgeCorpus c = toy_corpus();
  const LearnerProfile p = profile_with(Persona::kMomentumLearner, Bloom::kApplying, 0.5, {{"alpha", 1.0}});
  const std::vector<std::string> ids{"a1", "a2", "a3", "a4", "a5"};
  const ActionDistribution uniform = action_distribution(PolicyParams{}, LearnerState{}, p, c, ids);
  CHECK(uniform.support == ids);
  for (double q : uniform.probs) CHECK(q == doctest::Approx(0.2));
  const std::vector<std::string> one{"a3"};
  CHECK(action_distribution(PolicyParams{}, LearnerState{}, p, c, one).probs[0] == 1.0);
  CHECK_THROWS_AS(action_distribution(PolicyParams{}, LearnerState{}, p, c, std::vector<std::string>{}), InvalidArgument);
  PolicyParams bad;
  bad.temperature = 0.0;
  CHECK_THROWS_AS(action_distribution(bad, LearnerState{}, p, c, ids), InvalidArgument);
}

TEST_CASE("softmax matches an extended-precision oracle") {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(10);
    for (auto& l : logits) l = rng.uniform(-30.0, 30.0);
    std::vector<double> probs, log_probs;
    softmax(logits, probs, log_probs);
    long double total = 0.0L;
    for (double l : logits) total += std::exp(static_cast<long double>(l));
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      const long double ref = std::exp(static_cast<long double>(logits[i])) / total;
      CHECK(std::abs(static_cast<long double>(probs[i]) - ref) < 1e-14L);
      sum += probs[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("softmax survives huge logits and is shift invariant") {
  std::vector<double> probs, log_probs, shifted_probs;
  softmax(std::vector<double>{1e6, -1e6, 1e6 - 1.0}, probs, log_probs);
  for (double q : probs) CHECK(std::isfinite(q));
  CHECK(probs[0] + probs[1] + probs[2] == doctest::Approx(1.0));
  const std::vector<double> base{0.3, -1.2, 2.5};
  softmax(base, probs, log_probs);
  softmax(std::vector<double>{100.3, 98.8, 102.5}, shifted_probs, log_probs);
  for (std::size_t i = 0; i < 3; ++i) CHECK(probs[i] == doctest::Approx(shifted_probs[i]).epsilon(1e-12));
}

TEST_CASE("sampling") {
  ActionDistribution single;
  single.support = {"only"};
  single.probs = {1.0};
  single.log_probs = {0.0};
  const SampledAction s = sample_action(single, 7);
  CHECK(s.id == "only");
  CHECK(s.log_prob == 0.0);

  ActionDistribution three;
  three.support = {"a", "b", "c"};
  three.probs = {0.2, 0.5, 0.3};
  for (double q : three.probs) three.log_probs.push_back(std::log(q));
  CHECK(sample_action(three, 99).id == sample_action(three, 99).id);
  CHECK(sample_action_at(three, 0.0).id == "a");
  CHECK(sample_action_at(three, 0.69).id == "b");
  CHECK(sample_action_at(three, 0.71).id == "c");

  std::map<std::string, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sample_action(three, static_cast<std::uint64_t>(i)).id];
  CHECK(std::abs(counts["a"] / double(draws) - 0.2) < 0.01);
  CHECK(std::abs(counts["b"] / double(draws) - 0.5) < 0.01);
  CHECK(std::abs(counts["c"] / double(draws) - 0.3) < 0.01);
}

TEST_CASE("state value") {
  Rng rng(21);
  const LearnerState s = state_with({{component("a", Dimension::kLongTermObjective, 0.4), false},
                                     {component("b", Dimension::kExplicitMotivation, 0.9), false}});
  const LearnerProfile p = profile_with(Persona::kConsolidator, Bloom::kApplying, 0.3);
  CHECK(state_value(ValueParams{}, s, p) == 0.0);
  ValueParams v;
  for (auto& w : v.weights) w = rng.uniform(-1.0, 1.0);
  const StateFeatureVector f = state_features(s, p);
  double dot = 0.0;
  for (std::size_t i = 0; i < kStateFeatureDim; ++i) dot += v.weights[i] * f[i];
  CHECK(state_value(v, s, p) == doctest::Approx(dot).epsilon(1e-15));
  ValueParams twice = v;
  for (auto& w : twice.weights) w *= 2.0;
  CHECK(state_value(twice, s, p) == doctest::Approx(2.0 * dot));
}

TEST_CASE("plan_next in deployment mode") {
  const KnowledgeCorpus c = toy_corpus();
  const LearnerProfile p = profile_with(Persona::kMomentumLearner, Bloom::kApplying, 0.5, {{"alpha", 1.0}});
  const std::vector<std::string> one{"a4"};
  CHECK(plan_next(PolicyParams{}, ValueParams{}, std::nullopt, LearnerState{}, p, c, one, 0.9) == "a4");
  const std::vector<std::string> ids{"a5", "a3", "a1", "a2"};
  CHECK(plan_next(PolicyParams{}, ValueParams{}, std::nullopt, LearnerState{}, p, c, ids, 0.9) == "a1");
  PolicyParams jac;
  jac.theta[kJaccardFeature] = 1.0;
  jac.theta[kBloomFeature] = -1.0;
  CHECK(plan_next(jac, ValueParams{}, std::nullopt, LearnerState{}, p, c, ids, 0.9) == "a1");
  PolicyParams shifted = jac;
  shifted.theta[kBiasFeature] += 7.0;
  CHECK(plan_next(shifted, ValueParams{}, std::nullopt, LearnerState{}, p, c, ids, 0.9) == "a1");
  CHECK_THROWS_AS(plan_next(jac, ValueParams{}, std::nullopt, LearnerState{}, p, c, std::vector<std::string>{}, 0.9),
                  InvalidArgument);
}

TEST_CASE("plan_next in evaluation mode agrees with enumeration") {
  RunConfig cfg;
  cfg.population_size = 30;
  const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), 4));
  const DataBundle data = build_data(cfg, corpus, 4);
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const SimLearner& L = data.population[static_cast<std::size_t>(i)];
    const Observation obs = observe(L, corpus, cfg.env);
    auto ids = obs.candidates.ids();
    ids.resize(5);
    ValueParams v;
    for (auto& w : v.weights) w = rng.uniform(-0.5, 0.5);
    const double gamma = 0.9;
    std::string best;
    double best_score = -1e300;
    for (const auto& id : ids) {
      const StepResult r = step(L, corpus, id);
      const double q = compute_reward(L.state, r.state, cfg.env.weights).total +
                       gamma * state_value(v, r.state, build_profile(r.learner.session, session_keywords(r.learner.session), cfg.env.profiler));
      if (q > best_score || (q == best_score && id < best)) {
        best_score = q;
        best = id;
      }
    }
    const PlanEnvironment env{&L, &cfg.env.weights};
    CHECK(plan_next(PolicyParams{}, v, env, L.state, obs.profile, corpus, ids, gamma) == best);
  }
}

TEST_CASE("plan_next with gamma 0 picks the single rewarding candidate") {
  RunConfig cfg;
  cfg.population_size = 60;
  const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), 8));
  const DataBundle data = build_data(cfg, corpus, 8);
  int checked = 0;
  for (const auto& L : data.population) {
    std::vector<std::string> zero, positive;
    for (const auto& [id, a] : corpus.actions()) {
      const double r = compute_reward(L.state, step(L, corpus, id).state).total;
      if (r == 0.0 && zero.size() < 4) zero.push_back(id);
      if (r > 0.0 && positive.empty()) positive.push_back(id);
    }
    if (positive.empty() || zero.size() < 4) continue;
    std::vector<std::string> ids = zero;
    ids.push_back(positive.front());
    const PlanEnvironment env{&L, nullptr};
    const LearnerProfile p = build_profile(L.session, session_keywords(L.session));
    CHECK(plan_next(PolicyParams{}, ValueParams{}, env, L.state, p, corpus, ids, 0.0) == positive.front());
    if (++checked == 10) break;
  }
  CHECK(checked > 0);
}

TEST_CASE("checkpoint round trip and layout guard") {
  Rng rng(1);
  Checkpoint cp;
  cp.policy = random_params(rng);
  for (auto& w : cp.value.weights) w = rng.uniform(-1, 1);
  const nlohmann::json j = to_json(cp);
  CHECK(j.at("version") == 1);
  CHECK(j.at("feature_layout_hash") == feature_layout_hash());
  const Checkpoint back = checkpoint_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.policy.theta == cp.policy.theta);
  CHECK(back.policy.temperature == cp.policy.temperature);
  CHECK(back.value.weights == cp.value.weights);
  nlohmann::json stale = j;
  stale["feature_layout_hash"] = "0000000000000000";
  CHECK_THROWS_AS(checkpoint_from_json(stale), FormatError);
  nlohmann::json short_theta = j;
  short_theta["theta"] = {1.0, 2.0};
  CHECK_THROWS_AS(checkpoint_from_json(short_theta), FormatError);
}

TEST_CASE("a session about one cluster plans an action from that cluster") {
  const KnowledgeCorpus corpus(generate_corpus(default_corpus_spec(), 5));
  Rng rng(5);
  for (const std::string topic : {"algebra", "chemistry", "linguistics"}) {
    InteractionSummary s;
    s.turns = 6;
    s.dwell_seconds = 240.0;
    s.quiz_total = 4;
    s.quiz_correct = 3;
    for (const auto& [id, a] : corpus.actions()) {
      if (a.topic != topic) continue;
      for (const auto& k : a.keywords) s.message_tokens[k] += 1.0;
    }
    const std::vector<InteractionSummary> session{s};
    const LearnerProfile p = build_profile(session, session_keywords(session));
    const CandidateSet c = retrieve(profile_query(p), corpus, {});
    PolicyParams params = random_params(rng, 0.1);
    params.theta[kJaccardFeature] = 2.0;
    const std::string chosen = plan_next(params, ValueParams{}, std::nullopt, LearnerState{}, p, corpus, c.ids(), 0.9);
    CHECK(corpus.at(chosen).topic == topic);
  }
}
