#include "cooccur/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "cooccur/errors.hpp"
#include "cooccur/text.hpp"

namespace cooccur {

namespace {

QueryNodePtr not_term() { return make_term("not"); }

// Both-sides antonym filter: X -> X AND NOT (guard NEAR "not").
QueryNodePtr not_filtered(QueryNodePtr base, QueryNodePtr guard, int window) {
  return make_and_not(std::move(base),
                      make_near(std::move(guard), not_term(), window));
}

}  // namespace

QueryNodePtr parse_atom(std::string_view text) {
  bool wildcard = !text.empty() && text.back() == '*';
  std::string_view body = wildcard ? text.substr(0, text.size() - 1) : text;
  std::vector<Token> tokens = tokenize(body);
  if (tokens.empty()) {
    throw Error("not a word or phrase: '" + std::string(text) + "'");
  }
  if (wildcard) {
    if (tokens.size() != 1 || tokens[0].surface.size() != body.size()) {
      throw Error("wildcard must be a single word with a trailing '*': '" +
                  std::string(text) + "'");
    }
    if (scalar_count(tokens[0].surface) < kMinWildcardPrefix) {
      throw Error("wildcard must be preceded by at least three characters: '" +
                  std::string(text) + "'");
    }
    return make_wildcard(tokens[0].surface);
  }
  if (tokens.size() == 1) return make_term(tokens[0].surface);
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (auto& t : tokens) words.push_back(std::move(t.surface));
  return make_phrase(std::move(words));
}

ScoreQueries score_queries(ScoreVariant variant, const std::string& problem,
                           const std::string& choice,
                           const std::optional<std::string>& context,
                           int near_window) {
  QueryNodePtr p = parse_atom(problem);
  QueryNodePtr c = parse_atom(choice);

  switch (variant) {
    case ScoreVariant::s1:
    case ScoreVariant::pmi:
      return {make_and(p, c), c};
    case ScoreVariant::s2:
      return {make_near(p, c, near_window), c};
    case ScoreVariant::s3: {
      QueryNodePtr guard = make_or(p, c);
      return {not_filtered(make_near(p, c, near_window), guard, near_window),
              not_filtered(c, c, near_window)};
    }
    case ScoreVariant::s4: {
      if (!context) {
        throw Error("score 4 requires a context word");
      }
      QueryNodePtr ctx = parse_atom(*context);
      QueryNodePtr guard = make_or(p, c);
      return {not_filtered(make_and(make_near(p, c, near_window), ctx), guard,
                           near_window),
              not_filtered(make_and(c, ctx), c, near_window)};
    }
  }
  throw Error("unknown score variant");
}

ScoredChoice score(const HitSource& source, ScoreVariant variant,
                   const std::string& problem, const std::string& choice,
                   const std::optional<std::string>& context,
                   int near_window) {
  ScoreQueries q =
      score_queries(variant, problem, choice, context, near_window);
  ScoredChoice result;
  result.choice = choice;
  result.numerator_query = to_query_string(*q.numerator);
  result.denominator_query = to_query_string(*q.denominator);
  result.numerator_hits = source.hits(*q.numerator);
  result.denominator_hits = source.hits(*q.denominator);

  if (variant == ScoreVariant::pmi) {
    std::uint64_t n = source.total_docs();
    std::uint64_t problem_hits = source.hits(*parse_atom(problem));
    if (n == 0 || problem_hits == 0 || result.denominator_hits == 0) {
      result.score = std::nullopt;  // zero marginal: no estimate
    } else if (result.numerator_hits == 0) {
      result.score = -std::numeric_limits<double>::infinity();
    } else {
      result.score = std::log2(static_cast<double>(result.numerator_hits) *
                               static_cast<double>(n) /
                               (static_cast<double>(problem_hits) *
                                static_cast<double>(result.denominator_hits)));
    }
    return result;
  }

  if (result.denominator_hits == 0) {
    result.score = std::nullopt;
  } else {
    result.score = static_cast<double>(result.numerator_hits) /
                   static_cast<double>(result.denominator_hits);
  }
  return result;
}

double pmi(const HitSource& source, const std::string& word_a,
           const std::string& word_b) {
  std::uint64_t n = source.total_docs();
  if (n == 0) throw Error("pmi needs a non-empty corpus");
  QueryNodePtr a = parse_atom(word_a);
  QueryNodePtr b = parse_atom(word_b);
  std::uint64_t ha = source.hits(*a);
  std::uint64_t hb = source.hits(*b);
  if (ha == 0) throw Error("pmi: zero marginal for '" + word_a + "'");
  if (hb == 0) throw Error("pmi: zero marginal for '" + word_b + "'");
  std::uint64_t joint = source.hits(*make_and(a, b));
  if (joint == 0) return -std::numeric_limits<double>::infinity();
  return std::log2(static_cast<double>(joint) * static_cast<double>(n) /
                   (static_cast<double>(ha) * static_cast<double>(hb)));
}

std::vector<std::string> context_candidates(const SynonymQuestion& question,
                                            const StopWordList& stops) {
  if (!question.sentence) return {};
  std::unordered_set<std::string> excluded;
  excluded.insert(fold_case(question.problem));
  for (const std::string& c : question.choices) excluded.insert(fold_case(c));

  std::vector<std::string> candidates;
  std::unordered_set<std::string> seen;
  for (const Token& t : tokenize(*question.sentence)) {
    std::string folded = fold_case(t.surface);
    if (excluded.count(folded) || stops.contains(folded)) continue;
    if (seen.insert(folded).second) candidates.push_back(std::move(folded));
  }
  return candidates;
}

std::string select_context(const HitSource& source,
                           const SynonymQuestion& question,
                           const StopWordList& stops, int near_window) {
  if (!question.sentence) {
    throw Error("no context available (question has no sentence)");
  }
  std::vector<std::string> candidates = context_candidates(question, stops);
  if (candidates.empty()) {
    throw Error(
        "no context candidates remain in the sentence; fall back to score 3");
  }
  std::size_t best = 0;
  std::optional<double> best_score;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ScoredChoice sc = score(source, ScoreVariant::s3, question.problem,
                            candidates[i], std::nullopt, near_window);
    if (sc.score && (!best_score || *sc.score > *best_score)) {
      best_score = sc.score;
      best = i;
    }
  }
  return candidates[best];
}

SynonymAnswer answer_synonym(const HitSource& source,
                             const SynonymQuestion& question,
                             ScoreVariant variant, const StopWordList& stops,
                             int near_window) {
  if (question.choices.empty()) {
    throw Error("question has no choices");
  }
  if (question.choices.size() < 2) {
    throw Error("question needs at least two choices");
  }
  {
    std::unordered_set<std::string> seen;
    for (const std::string& c : question.choices) {
      if (!seen.insert(fold_case(c)).second) {
        throw Error("choices are not distinct: '" + c + "'");
      }
    }
    if (seen.count(fold_case(question.problem))) {
      throw Error("problem word appears among the choices");
    }
  }

  SynonymAnswer answer;
  std::optional<std::string> context;
  if (variant == ScoreVariant::s4) {
    context = select_context(source, question, stops, near_window);
    answer.context = context;
  }

  answer.choices.reserve(question.choices.size());
  for (const std::string& c : question.choices) {
    answer.choices.push_back(
        score(source, variant, question.problem, c, context, near_window));
  }

  std::optional<double> best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < answer.choices.size(); ++i) {
    const auto& s = answer.choices[i].score;
    if (s && (!best || *s > *best)) {
      best = s;
      best_index = i;
    }
  }
  if (!best) {
    answer.chosen = 0;
    answer.tie = TieFlag::all_undefined;
    return answer;
  }
  std::size_t top_count = 0;
  for (const auto& sc : answer.choices) {
    if (sc.score && *sc.score == *best) ++top_count;
  }
  answer.chosen = best_index;
  answer.tie = top_count > 1 ? TieFlag::tie : TieFlag::none;
  return answer;
}

std::vector<QuestionRecord> parse_questions(std::istream& in) {
  std::vector<QuestionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("questions file line " + std::to_string(line_no) +
                    ": invalid JSON: " + e.what());
    }
    auto fail = [&](const std::string& what) -> void {
      throw IoError("questions file line " + std::to_string(line_no) + ": " +
                    what);
    };
    if (!obj.is_object()) fail("expected a JSON object");
    if (!obj.contains("problem") || !obj["problem"].is_string()) {
      fail("missing string field \"problem\"");
    }
    if (!obj.contains("choices") || !obj["choices"].is_array()) {
      fail("missing array field \"choices\"");
    }
    QuestionRecord rec;
    rec.line_no = line_no;
    rec.question.problem = obj["problem"].get<std::string>();
    for (const auto& c : obj["choices"]) {
      if (!c.is_string()) fail("\"choices\" must contain strings");
      rec.question.choices.push_back(c.get<std::string>());
    }
    if (obj.contains("sentence")) {
      if (!obj["sentence"].is_string()) fail("\"sentence\" must be a string");
      rec.question.sentence = obj["sentence"].get<std::string>();
    }
    if (obj.contains("key")) {
      if (!obj["key"].is_number_integer()) fail("\"key\" must be an integer");
      long long key = obj["key"].get<long long>();
      if (key < 0 ||
          static_cast<std::size_t>(key) >= rec.question.choices.size()) {
        fail("\"key\" is out of range");
      }
      rec.question.answer_key = static_cast<std::size_t>(key);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

SynonymRunReport run_synonym_set(const HitSource& source, std::istream& in,
                                 ScoreVariant variant,
                                 const StopWordList& stops, int near_window) {
  SynonymRunReport report;
  report.records = parse_questions(in);
  for (QuestionRecord& rec : report.records) {
    try {
      rec.answer =
          answer_synonym(source, rec.question, variant, stops, near_window);
    } catch (const Error& e) {
      rec.error = e.what();
      report.any_error = true;
      continue;
    }
    if (rec.question.answer_key) {
      ++report.keyed;
      rec.correct = rec.answer->chosen == *rec.question.answer_key;
      if (*rec.correct) ++report.correct;
    }
  }
  return report;
}

}  // namespace cooccur
