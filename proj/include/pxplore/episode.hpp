#pragma once
// The planning loop shared by training and evaluation: profile the learner,
// retrieve candidates, act, and score the resulting transition.

#include "pxplore/corpus.hpp"
#include "pxplore/profiler.hpp"
#include "pxplore/reward.hpp"
#include "pxplore/sim.hpp"

namespace pxplore {

struct EnvConfig {
  RetrievalConfig retrieval;
  RewardWeights weights;
  ProfilerConfig profiler;
  double gamma = 0.9;
  int horizon = 5;
};

struct Observation {
  LearnerProfile profile;
  TokenBag query;
  CandidateSet candidates;
};

Observation observe(const SimLearner& learner, const KnowledgeCorpus& corpus,
                    const EnvConfig& env);

struct Transition {
  SimLearner learner;
  RewardBreakdown reward;
};

Transition transition(const SimLearner& learner, const KnowledgeCorpus& corpus,
                      const std::string& action_id, const EnvConfig& env);

}  // namespace pxplore
