#include "pxplore/profiler.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <string>

#include "pxplore/error.hpp"

namespace pxplore {

namespace {

constexpr std::array<std::string_view, kPersonas> kPersonaNames = {
    "MomentumLearner", "Consolidator", "Explorer", "Struggler"};

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "but",  "by",   "can",
      "do",   "does", "for",  "from", "i",    "in",   "is",   "it",   "me",   "my",
      "of",   "on",   "or",   "so",   "that", "the",  "this", "to",   "was",  "we",
      "with", "you",  "your", "about", "want", "like", "just", "more", "some", "please"};
  return words;
}

const std::set<std::string, std::less<>>& question_markers() {
  static const std::set<std::string, std::less<>> words = {"why", "how", "what", "when",
                                                           "which", "explain"};
  return words;
}

const std::set<std::string, std::less<>>& review_markers() {
  static const std::set<std::string, std::less<>> words = {"again", "review", "repeat",
                                                           "revisit", "recap"};
  return words;
}

const std::set<std::string, std::less<>>& explore_markers() {
  static const std::set<std::string, std::less<>> words = {"new", "other", "another",
                                                           "explore", "beyond", "else"};
  return words;
}

// Sum in ascending value order so the result does not depend on input order.
double canonical_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(values.size());
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::string_view persona_name(Persona p) {
  return kPersonaNames.at(static_cast<std::size_t>(p));
}

std::optional<Persona> parse_persona(std::string_view name) {
  for (std::size_t i = 0; i < kPersonaNames.size(); ++i) {
    if (kPersonaNames[i] == name) return static_cast<Persona>(i);
  }
  return std::nullopt;
}

BehavioralIndicators analyze_behavior(const InteractionSummary& s, const ProfilerConfig& config) {
  BehavioralIndicators ind;
  ind.engagement = clamp01(s.dwell_seconds / config.dwell_cap_seconds);
  ind.review_intensity = clamp01(static_cast<double>(s.revisits) / config.revisit_cap);
  ind.understanding = s.quiz_total > 0
                          ? clamp01(static_cast<double>(s.quiz_correct) / s.quiz_total)
                          : config.no_quiz_understanding;
  return ind;
}

MessageAnnotation annotate_messages(const TokenBag& messages) {
  MessageAnnotation out;
  for (const auto& [token, weight] : messages) {
    const int count = static_cast<int>(weight);
    if (question_markers().count(token) != 0) {
      out.questions += count;
    } else if (review_markers().count(token) != 0) {
      out.review_requests += count;
    } else if (explore_markers().count(token) != 0) {
      out.exploration_requests += count;
    } else if (stopwords().count(token) == 0 && weight > 0.0) {
      out.content[token] = weight;
    }
  }
  return out;
}

Persona classify_persona(const BehavioralIndicators& ind, int interest_breadth,
                         const ProfilerConfig& config) {
  if (ind.understanding < config.struggle_below) return Persona::kStruggler;
  if (ind.review_intensity >= config.consolidate_at) return Persona::kConsolidator;
  if (interest_breadth >= config.explore_breadth) return Persona::kExplorer;
  return Persona::kMomentumLearner;
}

Bloom cognition_from_understanding(double understanding, const ProfilerConfig& config) {
  if (understanding < config.cognition_low) return Bloom::kUnderstanding;
  if (understanding < config.cognition_mid) return Bloom::kApplying;
  return Bloom::kAnalyzing;
}

LearnerProfile build_profile(const std::vector<InteractionSummary>& summaries,
                             const TokenBag& session_keywords, const ProfilerConfig& config) {
  if (summaries.empty()) throw InvalidArgument("build_profile: no interaction summaries");
  std::vector<double> engagement;
  std::vector<double> review;
  std::vector<double> understanding;
  for (const auto& s : summaries) {
    const BehavioralIndicators ind = analyze_behavior(s, config);
    engagement.push_back(ind.engagement);
    review.push_back(ind.review_intensity);
    understanding.push_back(ind.understanding);
  }
  LearnerProfile p;
  p.indicators = {canonical_mean(engagement), canonical_mean(review),
                  canonical_mean(understanding)};
  p.engagement = p.indicators.engagement;
  p.cognition = cognition_from_understanding(p.indicators.understanding, config);

  const MessageAnnotation ann = annotate_messages(session_keywords);
  std::vector<std::pair<std::string, double>> ranked(ann.content.begin(), ann.content.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > config.max_interest_tokens) ranked.resize(config.max_interest_tokens);
  for (auto& [token, weight] : ranked) p.interest.emplace(std::move(token), weight);

  p.persona = classify_persona(p.indicators, static_cast<int>(p.interest.size()), config);
  return p;
}

TokenBag profile_query(const LearnerProfile& p) {
  TokenBag q = p.interest;
  std::string persona = "persona_" + std::string(persona_name(p.persona));
  std::string cognition = "bloom_" + std::string(bloom_name(p.cognition));
  std::transform(persona.begin(), persona.end(), persona.begin(), ::tolower);
  std::transform(cognition.begin(), cognition.end(), cognition.begin(), ::tolower);
  q[persona] += 1.0;
  q[cognition] += 1.0;
  return q;
}

nlohmann::json to_json(const LearnerProfile& p) {
  return {{"cognition", bloom_name(p.cognition)},
          {"engagement", p.engagement},
          {"interest", p.interest},
          {"persona", persona_name(p.persona)},
          {"indicators",
           {{"engagement", p.indicators.engagement},
            {"review_intensity", p.indicators.review_intensity},
            {"understanding", p.indicators.understanding}}}};
}

LearnerProfile profile_from_json(const nlohmann::json& j) {
  try {
    LearnerProfile p;
    const auto cognition = parse_bloom(j.at("cognition").get<std::string>());
    const auto persona = parse_persona(j.at("persona").get<std::string>());
    if (!cognition || !persona) throw FormatError("profile: bad cognition or persona");
    p.cognition = *cognition;
    p.persona = *persona;
    p.engagement = j.at("engagement").get<double>();
    p.interest = j.at("interest").get<TokenBag>();
    if (j.contains("indicators")) {
      const auto& ji = j["indicators"];
      p.indicators = {ji.at("engagement").get<double>(), ji.at("review_intensity").get<double>(),
                      ji.at("understanding").get<double>()};
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("profile: ") + e.what());
  }
}

nlohmann::json to_json(const InteractionSummary& s) {
  return {{"turns", s.turns},
          {"dwell_seconds", s.dwell_seconds},
          {"revisits", s.revisits},
          {"quiz_correct", s.quiz_correct},
          {"quiz_total", s.quiz_total},
          {"message_tokens", s.message_tokens}};
}

InteractionSummary interaction_from_json(const nlohmann::json& j) {
  try {
    InteractionSummary s;
    s.turns = j.value("turns", 0);
    s.dwell_seconds = j.value("dwell_seconds", 0.0);
    s.revisits = j.value("revisits", 0);
    s.quiz_correct = j.value("quiz_correct", 0);
    s.quiz_total = j.value("quiz_total", 0);
    if (j.contains("message_tokens")) {
      const auto& m = j["message_tokens"];
      if (m.is_string()) {
        s.message_tokens = bag_of(tokenize(m.get<std::string>()));
      } else {
        s.message_tokens = m.get<TokenBag>();
      }
    }
    if (s.quiz_correct > s.quiz_total || s.quiz_total < 0 || s.dwell_seconds < 0.0) {
      throw FormatError("interaction: inconsistent quiz or dwell fields");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("interaction: ") + e.what());
  }
}

TokenBag session_keywords(const std::vector<InteractionSummary>& summaries) {
  TokenBag out;
  for (const auto& s : summaries) {
    for (const auto& [t, w] : s.message_tokens) out[t] += w;
  }
  return out;
}

}  // namespace pxplore
