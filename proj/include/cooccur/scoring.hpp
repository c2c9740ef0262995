// Co-occurrence scoring over any HitSource: pointwise mutual information,
// the four conditional-probability score variants, synonym-question
// answering by argmax, and automatic context-word selection.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cooccur/corpus.hpp"
#include "cooccur/hit_source.hpp"
#include "cooccur/query.hpp"

namespace cooccur {

/// Interprets plain text as an atomic query node: one word -> Term, several
/// words -> Phrase, a single word with a trailing '*' -> Wildcard. Unlike
/// parse(), keywords have no special meaning here ("not" is just a word).
QueryNodePtr parse_atom(std::string_view text);

enum class ScoreVariant { s1, s2, s3, s4, pmi };

struct ScoreQueries {
  QueryNodePtr numerator;
  QueryNodePtr denominator;
};

/// Builds the variant's numerator/denominator query pair.
///   s1: problem AND choice               / choice
///   s2: problem NEAR choice              / choice
///   s3: s2 with both sides filtered by AND NOT (... NEAR "not")
///   s4: s3 with an additional AND context on both sides
///   pmi: problem AND choice              / choice   (marginals queried
///        separately)
ScoreQueries score_queries(ScoreVariant variant, const std::string& problem,
                           const std::string& choice,
                           const std::optional<std::string>& context = {},
                           int near_window = kDefaultNearWindow);

struct ScoredChoice {
  std::string choice;
  std::string numerator_query;
  std::string denominator_query;
  std::uint64_t numerator_hits = 0;
  std::uint64_t denominator_hits = 0;
  // numerator/denominator for the ratio variants, log2-based for pmi
  // (-infinity when the joint count is zero). nullopt = UNDEFINED
  // (zero denominator / zero marginal); ranks below every defined score.
  std::optional<double> score;
};

ScoredChoice score(const HitSource& source, ScoreVariant variant,
                   const std::string& problem, const std::string& choice,
                   const std::optional<std::string>& context = {},
                   int near_window = kDefaultNearWindow);

/// log2(hits(a AND b) * N / (hits(a) * hits(b))) with document-frequency
/// probability estimates. Zero joint count returns -infinity; a zero
/// marginal or an empty corpus throws Error.
double pmi(const HitSource& source, const std::string& word_a,
           const std::string& word_b);

struct SynonymQuestion {
  std::string problem;
  std::vector<std::string> choices;        // n >= 2, distinct
  std::optional<std::string> sentence;     // context for score 4
  std::optional<std::size_t> answer_key;   // 0-based index into choices
};

enum class TieFlag { none, tie, all_undefined };

struct SynonymAnswer {
  std::size_t chosen = 0;
  TieFlag tie = TieFlag::none;
  std::vector<ScoredChoice> choices;
  std::optional<std::string> context;  // the selected word, score 4 only
};

/// Candidate context words: the sentence minus the problem word, the
/// choices and stop words; case-folded, deduplicated, in sentence order.
std::vector<std::string> context_candidates(const SynonymQuestion& question,
                                            const StopWordList& stops);

/// Scores each candidate c by score 3 of (problem | c) and returns the
/// maximum (first in sentence order on a tie). Throws Error when no
/// candidate remains.
std::string select_context(const HitSource& source,
                           const SynonymQuestion& question,
                           const StopWordList& stops,
                           int near_window = kDefaultNearWindow);

/// Scores every choice and returns the argmax. UNDEFINED loses to every
/// defined score; ties go to the lowest index and are flagged; a question
/// with every choice UNDEFINED selects index 0 with TieFlag::all_undefined.
SynonymAnswer answer_synonym(const HitSource& source,
                             const SynonymQuestion& question,
                             ScoreVariant variant,
                             const StopWordList& stops =
                                 StopWordList::defaults(),
                             int near_window = kDefaultNearWindow);

struct QuestionRecord {
  std::size_t line_no = 0;
  SynonymQuestion question;
  std::optional<SynonymAnswer> answer;
  std::optional<bool> correct;  // only when the question has a key
  std::string error;            // non-empty when the question failed
};

struct SynonymRunReport {
  std::vector<QuestionRecord> records;
  std::size_t keyed = 0;
  std::size_t correct = 0;
  bool any_error = false;
  std::optional<double> accuracy() const {
    if (keyed == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(keyed);
  }
};

/// One JSON object per line: {"problem": str, "choices": [str, ...],
/// "sentence": str?, "key": int?}. Blank lines are skipped. Throws IoError
/// with the line number on malformed input.
std::vector<QuestionRecord> parse_questions(std::istream& in);

/// Answers every question; per-question evaluation failures are recorded
/// and the run continues. Accuracy covers only questions with keys.
SynonymRunReport run_synonym_set(const HitSource& source, std::istream& in,
                                 ScoreVariant variant,
                                 const StopWordList& stops =
                                     StopWordList::defaults(),
                                 int near_window = kDefaultNearWindow);

}  // namespace cooccur
