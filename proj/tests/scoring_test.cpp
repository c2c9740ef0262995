#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "cooccur/errors.hpp"
#include "cooccur/index.hpp"
#include "cooccur/oracle.hpp"
#include "cooccur/scoring.hpp"
#include "cooccur/stub.hpp"
#include "cooccur/text.hpp"
#include "test_util.hpp"

using namespace cooccur;

TEST_CASE("score query builders produce the canonical shapes") {
  ScoreQueries s1 = score_queries(ScoreVariant::s1, "levied", "imposed");
  CHECK(to_query_string(*s1.numerator) == "(levied AND imposed)");
  CHECK(to_query_string(*s1.denominator) == "imposed");

  ScoreQueries s2 = score_queries(ScoreVariant::s2, "levied", "imposed");
  CHECK(to_query_string(*s2.numerator) == "(levied NEAR imposed)");

  ScoreQueries s3 = score_queries(ScoreVariant::s3, "levied", "imposed");
  CHECK(to_query_string(*s3.numerator) ==
        "((levied NEAR imposed) AND NOT ((levied OR imposed) NEAR \"not\"))");
  CHECK(to_query_string(*s3.denominator) ==
        "(imposed AND NOT (imposed NEAR \"not\"))");

  ScoreQueries s4 =
      score_queries(ScoreVariant::s4, "tap", "drain", std::string("syrup"));
  CHECK(to_query_string(*s4.numerator) ==
        "(((tap NEAR drain) AND syrup) AND NOT ((tap OR drain) NEAR "
        "\"not\"))");
  CHECK(to_query_string(*s4.denominator) ==
        "((drain AND syrup) AND NOT (drain NEAR \"not\"))");

  CHECK_THROWS_AS(score_queries(ScoreVariant::s4, "tap", "drain"), Error);

  // Phrase-valued words keep the pipeline intact.
  ScoreQueries phrases =
      score_queries(ScoreVariant::s2, "musical instruments", "banana peels");
  CHECK(to_query_string(*phrases.numerator) ==
        "(\"musical instruments\" NEAR \"banana peels\")");
}

TEST_CASE("score 3 reproduces the recorded hit-count arithmetic") {
  StubHitSource stub =
      StubHitSource::from_file(fixture_path("stub_table1.json"));

  struct Row {
    const char* choice;
    std::uint64_t numerator, denominator;
    double printed;
  };
  const Row rows[] = {
      {"imposed", 2299, 1147535, 0.0020034},
      {"believed", 80, 2246982, 0.0000356},
      {"requested", 216, 7457552, 0.0000290},
      {"correlated", 3, 296631, 0.0000101},
  };
  for (const Row& row : rows) {
    CAPTURE(row.choice);
    ScoredChoice sc = score(stub, ScoreVariant::s3, "levied", row.choice);
    CHECK(sc.numerator_hits == row.numerator);
    CHECK(sc.denominator_hits == row.denominator);
    REQUIRE(sc.score.has_value());
    double exact = static_cast<double>(row.numerator) /
                   static_cast<double>(row.denominator);
    CHECK(*sc.score == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(*sc.score - row.printed) <= 1e-7);
  }
}

TEST_CASE("zero denominator scores UNDEFINED, not an exception") {
  StubHitSource stub;
  stub.set_count("(p AND c)", 0);
  stub.set_count("c", 0);
  ScoredChoice sc = score(stub, ScoreVariant::s1, "p", "c");
  CHECK_FALSE(sc.score.has_value());
}

TEST_CASE("score 2 on a tiny real corpus") {
  Corpus corpus = Corpus::from_texts({{"d1", "p c"}, {"d2", "c"}});
  PositionalIndex index = PositionalIndex::build(corpus);
  ScoredChoice sc = score(index, ScoreVariant::s2, "p", "c");
  CHECK(sc.numerator_hits == 1);
  CHECK(sc.denominator_hits == 2);
  CHECK(*sc.score == doctest::Approx(0.5));
}

TEST_CASE("pmi hand enumeration") {
  // Independent-looking split: log2(1*4 / (2*2)) = 0.
  Corpus corpus = Corpus::from_texts(
      {{"d1", "a b"}, {"d2", "a"}, {"d3", "b"}, {"d4", "x"}});
  PositionalIndex index = PositionalIndex::build(corpus);
  CHECK(pmi(index, "a", "b") == doctest::Approx(0.0));

  // a only ever occurs with b: log2(1*4 / (1*2)) = 1.
  Corpus corpus2 = Corpus::from_texts(
      {{"d1", "a b"}, {"d2", "b"}, {"d3", "x"}, {"d4", "y"}});
  PositionalIndex index2 = PositionalIndex::build(corpus2);
  CHECK(pmi(index2, "a", "b") == doctest::Approx(1.0));

  // Words co-occurring in every document: pmi = 0.
  Corpus corpus3 = Corpus::from_texts({{"d1", "a b"}, {"d2", "b a"}});
  PositionalIndex index3 = PositionalIndex::build(corpus3);
  CHECK(pmi(index3, "a", "b") == doctest::Approx(0.0));

  // Never co-occurring: negative infinity sentinel.
  Corpus corpus4 = Corpus::from_texts({{"d1", "a"}, {"d2", "b"}});
  PositionalIndex index4 = PositionalIndex::build(corpus4);
  CHECK(std::isinf(pmi(index4, "a", "b")));
  CHECK(pmi(index4, "a", "b") < 0);

  // Zero marginal is an error.
  CHECK_THROWS_AS(pmi(index4, "a", "zz"), Error);
  CHECK_THROWS_AS(pmi(PositionalIndex::build(Corpus{}), "a", "b"), Error);
}

TEST_CASE("answer_synonym picks the recorded argmax") {
  StubHitSource stub =
      StubHitSource::from_file(fixture_path("stub_table1.json"));
  SynonymQuestion q;
  q.problem = "levied";
  q.choices = {"imposed", "believed", "requested", "correlated"};
  SynonymAnswer ans = answer_synonym(stub, q, ScoreVariant::s3);
  CHECK(ans.chosen == 0);
  CHECK(q.choices[ans.chosen] == "imposed");
  CHECK(ans.tie == TieFlag::none);
  REQUIRE(ans.choices.size() == 4);
  CHECK(ans.choices[0].numerator_hits == 2299);
}

TEST_CASE("ties and all-undefined outcomes are deterministic and flagged") {
  SynonymQuestion q;
  q.problem = "p";
  q.choices = {"c1", "c2"};

  SUBCASE("all undefined") {
    Corpus corpus = Corpus::from_texts({{"d1", "p x"}});
    PositionalIndex index = PositionalIndex::build(corpus);
    SynonymAnswer ans = answer_synonym(index, q, ScoreVariant::s1);
    CHECK(ans.chosen == 0);
    CHECK(ans.tie == TieFlag::all_undefined);
  }
  SUBCASE("equal top scores go to the lower index") {
    Corpus corpus = Corpus::from_texts({{"d1", "p c1 c2"}, {"d2", "c1 c2"}});
    PositionalIndex index = PositionalIndex::build(corpus);
    SynonymAnswer ans = answer_synonym(index, q, ScoreVariant::s1);
    CHECK(ans.chosen == 0);
    CHECK(ans.tie == TieFlag::tie);
  }
}

TEST_CASE("answer_synonym validates the question") {
  Corpus corpus = Corpus::from_texts({{"d1", "a"}});
  PositionalIndex index = PositionalIndex::build(corpus);
  SynonymQuestion empty;
  empty.problem = "p";
  CHECK_THROWS_AS(answer_synonym(index, empty, ScoreVariant::s1), Error);

  SynonymQuestion dup;
  dup.problem = "p";
  dup.choices = {"a", "a"};
  CHECK_THROWS_AS(answer_synonym(index, dup, ScoreVariant::s1), Error);

  SynonymQuestion self;
  self.problem = "a";
  self.choices = {"a", "b"};
  CHECK_THROWS_AS(answer_synonym(index, self, ScoreVariant::s1), Error);
}

TEST_CASE("context candidates follow the removal procedure") {
  SynonymQuestion q;
  q.problem = "tap";
  q.choices = {"drain", "boil", "knock", "rap"};
  q.sentence =
      "Every year in the early spring farmers tap maple syrup from their "
      "trees";
  std::vector<std::string> candidates =
      context_candidates(q, StopWordList::defaults());
  CHECK(candidates == std::vector<std::string>{"every", "year", "early",
                                               "spring", "farmers", "maple",
                                               "syrup", "trees"});
}

TEST_CASE("select_context picks the strongest co-occurring candidate") {
  // Only "syrup" ever co-occurs with the problem word.
  Corpus corpus = Corpus::from_texts({
      {"d1", "tap syrup pipe"},
      {"d2", "syrup tap"},
      {"d3", "maple alone"},
      {"d4", "spring water"},
      {"d5", "farmers market"},
  });
  PositionalIndex index = PositionalIndex::build(corpus);
  SynonymQuestion q;
  q.problem = "tap";
  q.choices = {"drain", "boil"};
  q.sentence = "farmers tap maple syrup in spring";
  CHECK(select_context(index, q, StopWordList::defaults()) == "syrup");

  SynonymQuestion no_sentence;
  no_sentence.problem = "tap";
  no_sentence.choices = {"drain", "boil"};
  CHECK_THROWS_WITH_AS(
      select_context(index, no_sentence, StopWordList::defaults()),
      doctest::Contains("no context"), Error);

  SynonymQuestion empty_candidates;
  empty_candidates.problem = "tap";
  empty_candidates.choices = {"drain", "boil"};
  empty_candidates.sentence = "the tap and the drain";
  CHECK_THROWS_WITH_AS(
      select_context(index, empty_candidates, StopWordList::defaults()),
      doctest::Contains("score 3"), Error);
}

TEST_CASE("score 4 conditions on the selected context word") {
  Corpus corpus = Corpus::from_texts({
      {"d1", "tap syrup drain flows"},
      {"d2", "syrup drain tap"},
      {"d3", "tap knock door syrup"},
      {"d4", "knock knock"},
      {"d5", "drain syrup"},
  });
  PositionalIndex index = PositionalIndex::build(corpus);
  SynonymQuestion q;
  q.problem = "tap";
  q.choices = {"drain", "knock"};
  q.sentence = "farmers tap maple syrup in spring";
  SynonymAnswer ans = answer_synonym(index, q, ScoreVariant::s4);
  REQUIRE(ans.context.has_value());
  CHECK(*ans.context == "syrup");
  // Every choice's queries must mention the context word.
  for (const ScoredChoice& sc : ans.choices) {
    CHECK(sc.numerator_query.find("syrup") != std::string::npos);
    CHECK(sc.denominator_query.find("syrup") != std::string::npos);
  }
}

TEST_CASE("question files parse with line diagnostics") {
  std::istringstream good(
      R"({"problem": "levied", "choices": ["imposed", "believed"], "key": 0}

{"problem": "tap", "choices": ["drain", "boil"], "sentence": "s"}
)");
  auto records = parse_questions(good);
  REQUIRE(records.size() == 2);
  CHECK(records[0].line_no == 1);
  CHECK(records[0].question.answer_key == 0);
  CHECK(records[1].line_no == 3);
  CHECK(records[1].question.sentence == "s");

  std::istringstream bad_json("{nope\n");
  CHECK_THROWS_WITH_AS(parse_questions(bad_json), doctest::Contains("line 1"),
                       IoError);

  std::istringstream missing(R"({"choices": ["a", "b"]})");
  CHECK_THROWS_WITH_AS(parse_questions(missing),
                       doctest::Contains("problem"), IoError);

  std::istringstream bad_key(
      R"({"problem": "p", "choices": ["a", "b"], "key": 7})");
  CHECK_THROWS_WITH_AS(parse_questions(bad_key),
                       doctest::Contains("out of range"), IoError);
}

TEST_CASE("run_synonym_set accuracy accounting") {
  StubHitSource stub =
      StubHitSource::from_file(fixture_path("stub_table1.json"));

  SUBCASE("single keyed question") {
    std::ifstream in(fixture_path("questions_table1.jsonl"));
    REQUIRE(in.good());
    SynonymRunReport report = run_synonym_set(stub, in, ScoreVariant::s3);
    REQUIRE(report.records.size() == 1);
    CHECK(report.keyed == 1);
    CHECK(report.correct == 1);
    CHECK(*report.accuracy() == doctest::Approx(1.0));
    CHECK_FALSE(report.any_error);
  }
  SUBCASE("empty file reports no accuracy") {
    std::istringstream in("");
    SynonymRunReport report = run_synonym_set(stub, in, ScoreVariant::s3);
    CHECK(report.records.empty());
    CHECK_FALSE(report.accuracy().has_value());
  }
  SUBCASE("unkeyed questions answered but excluded from accuracy") {
    std::istringstream in(
        R"({"problem": "levied", "choices": ["imposed", "believed"]})");
    SynonymRunReport report = run_synonym_set(stub, in, ScoreVariant::s3);
    REQUIRE(report.records.size() == 1);
    CHECK(report.records[0].answer.has_value());
    CHECK(report.keyed == 0);
    CHECK_FALSE(report.accuracy().has_value());
  }
  SUBCASE("per-question errors do not stop the run") {
    Corpus corpus = Corpus::from_texts({{"d1", "p c1 c2 ctx"}});
    PositionalIndex index = PositionalIndex::build(corpus);
    std::istringstream in(
        "{\"problem\": \"p\", \"choices\": [\"c1\", \"c2\"]}\n"
        "{\"problem\": \"p\", \"choices\": [\"c1\", \"c2\"], "
        "\"sentence\": \"ctx here\"}\n");
    SynonymRunReport report = run_synonym_set(index, in, ScoreVariant::s4);
    REQUIRE(report.records.size() == 2);
    CHECK_FALSE(report.records[0].error.empty());  // no sentence
    CHECK(report.records[1].answer.has_value());
    CHECK(report.any_error);
  }
}

TEST_CASE("variant refinement and score bounds") {
  Rng rng(808);
  for (int i = 0; i < 60; ++i) {
    Corpus corpus = random_corpus(rng, 80, 40);
    PositionalIndex index = PositionalIndex::build(corpus);
    const auto& vocab = test_vocab();
    std::string problem = vocab[rng.below(vocab.size())];
    std::string choice = vocab[rng.below(vocab.size())];
    if (fold_case(problem) == fold_case(choice)) continue;

    ScoredChoice s1 = score(index, ScoreVariant::s1, problem, choice);
    ScoredChoice s2 = score(index, ScoreVariant::s2, problem, choice);
    CAPTURE(problem);
    CAPTURE(choice);
    CHECK(s2.numerator_hits <= s1.numerator_hits);
    if (s1.score) {
      CHECK(*s1.score >= 0.0);
      CHECK(*s1.score <= 1.0);
    }
    if (s2.score) {
      CHECK(*s2.score >= 0.0);
      CHECK(*s2.score <= 1.0);
    }
  }
}

TEST_CASE("argmax agreement between pmi and score 1") {
  Rng rng(606);
  int checked = 0;
  while (checked < 120) {
    Corpus corpus = random_corpus(rng, 60, 40);
    PositionalIndex index = PositionalIndex::build(corpus);
    SynonymQuestion q;
    q.problem = "cat";
    q.choices = {"dog", "bear", "teddy"};
    bool positive = index.hits(*parse_atom(q.problem)) > 0;
    for (const std::string& c : q.choices) {
      positive = positive && index.hits(*parse_atom(c)) > 0 &&
                 index.hits(*make_and(parse_atom(q.problem), parse_atom(c))) >
                     0;
    }
    if (!positive) continue;
    ++checked;
    SynonymAnswer viaS1 = answer_synonym(index, q, ScoreVariant::s1);
    SynonymAnswer viaPmi = answer_synonym(index, q, ScoreVariant::pmi);
    CHECK(viaS1.chosen == viaPmi.chosen);
    CHECK((viaS1.tie == TieFlag::tie) == (viaPmi.tie == TieFlag::tie));
  }
}

TEST_CASE("scores are scale-free in corpus size") {
  Rng rng(707);
  Corpus corpus = random_corpus(rng, 40, 30);
  std::vector<Document> doubled = corpus.documents();
  for (const Document& d : corpus.documents()) {
    Document copy = d;
    copy.doc_id = d.doc_id + "-copy";
    doubled.push_back(std::move(copy));
  }
  PositionalIndex once = PositionalIndex::build(corpus);
  PositionalIndex twice = PositionalIndex::build(Corpus(std::move(doubled)));

  SynonymQuestion q;
  q.problem = "cat";
  q.choices = {"dog", "bear", "Flugly"};
  for (ScoreVariant v :
       {ScoreVariant::s1, ScoreVariant::s2, ScoreVariant::s3}) {
    SynonymAnswer a = answer_synonym(once, q, v);
    SynonymAnswer b = answer_synonym(twice, q, v);
    CHECK(a.chosen == b.chosen);
    for (std::size_t i = 0; i < a.choices.size(); ++i) {
      CHECK(b.choices[i].numerator_hits == 2 * a.choices[i].numerator_hits);
      CHECK(b.choices[i].denominator_hits ==
            2 * a.choices[i].denominator_hits);
      CHECK(a.choices[i].score.has_value() ==
            b.choices[i].score.has_value());
      if (a.choices[i].score) {
        CHECK(*a.choices[i].score == doctest::Approx(*b.choices[i].score));
      }
    }
  }
}
