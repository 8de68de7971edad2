#include "pxplore/episode.hpp"

namespace pxplore {

Observation observe(const SimLearner& learner, const KnowledgeCorpus& corpus,
                    const EnvConfig& env) {
  Observation obs;
  obs.profile = build_profile(learner.session, session_keywords(learner.session), env.profiler);
  obs.query = profile_query(obs.profile);
  obs.candidates = retrieve(obs.query, corpus, learner.history, env.retrieval);
  return obs;
}

Transition transition(const SimLearner& learner, const KnowledgeCorpus& corpus,
                      const std::string& action_id, const EnvConfig& env) {
  StepResult r = step(learner, corpus, action_id);
  Transition t;
  t.reward = compute_reward(learner.state, r.state, env.weights);
  t.learner = std::move(r.learner);
  return t;
}

}  // namespace pxplore
