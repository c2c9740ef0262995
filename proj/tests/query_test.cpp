#include <doctest.h>

#include "cooccur/query.hpp"
#include "cooccur/verify.hpp"
#include "test_util.hpp"

using namespace cooccur;

namespace {

std::string reprint(const std::string& text) {
  return to_query_string(*parse(text));
}

}  // namespace

TEST_CASE("parse boolean operators") {
  CHECK(reprint("levied AND imposed") == "(levied AND imposed)");
  CHECK(reprint("a OR b") == "(a OR b)");
  CHECK(reprint("a AND NOT b") == "(a AND NOT b)");
  CHECK(reprint("a and not b") == "(a AND NOT b)");

  QueryNodePtr n = parse("levied AND imposed");
  const auto* conj = std::get_if<And>(&n->value);
  REQUIRE(conj != nullptr);
  CHECK(std::get<Term>(conj->left->value).surface == "levied");
  CHECK(std::get<Term>(conj->right->value).surface == "imposed");
}

TEST_CASE("parse near with wildcard operand") {
  QueryNodePtr n = parse("(actress NEAR Flu*) AND glamorous");
  const auto* conj = std::get_if<And>(&n->value);
  REQUIRE(conj != nullptr);
  const auto* near = std::get_if<Near>(&conj->left->value);
  REQUIRE(near != nullptr);
  CHECK(near->window == 10);
  CHECK(std::get<Term>(near->left->value).surface == "actress");
  CHECK(std::get<Wildcard>(near->right->value).prefix == "Flu");
  CHECK(std::get<Term>(conj->right->value).surface == "glamorous");
  CHECK(to_query_string(*n) == "((actress NEAR Flu*) AND glamorous)");
}

TEST_CASE("parse the antonym-filtered query") {
  QueryNodePtr n = parse(
      "(levied NEAR imposed) AND NOT ((levied OR imposed) NEAR \"not\")");
  const auto* diff = std::get_if<AndNot>(&n->value);
  REQUIRE(diff != nullptr);
  CHECK(std::get_if<Near>(&diff->left->value) != nullptr);
  const auto* near = std::get_if<Near>(&diff->right->value);
  REQUIRE(near != nullptr);
  CHECK(std::get_if<Or>(&near->left->value) != nullptr);
  CHECK(std::get<Term>(near->right->value).surface == "not");
  CHECK(to_query_string(*n) ==
        "((levied NEAR imposed) AND NOT ((levied OR imposed) NEAR \"not\"))");
}

TEST_CASE("bare multiword sequences parse as phrases") {
  QueryNodePtr n = parse("musical instruments NEAR banana peels");
  const auto* near = std::get_if<Near>(&n->value);
  REQUIRE(near != nullptr);
  CHECK(std::get<Phrase>(near->left->value).terms.size() == 2);
  CHECK(std::get<Phrase>(near->right->value).terms.size() == 2);
  CHECK(to_query_string(*n) ==
        "(\"musical instruments\" NEAR \"banana peels\")");
}

TEST_CASE("precedence NEAR > AND > OR, left associative") {
  CHECK(reprint("a NEAR b AND c OR d") == "(((a NEAR b) AND c) OR d)");
  CHECK(reprint("a OR b OR c") == "((a OR b) OR c)");
  CHECK(reprint("a AND b AND NOT c") == "((a AND b) AND NOT c)");
  CHECK(reprint("a OR b AND c") == "(a OR (b AND c))");
  CHECK(reprint("(a OR b) AND c") == "((a OR b) AND c)");
}

TEST_CASE("quoting suppresses keywords, case modes preserved") {
  QueryNodePtr n = parse("\"not\"");
  CHECK(std::get<Term>(n->value).surface == "not");
  CHECK(reprint("\"not\"") == "\"not\"");
  CHECK(reprint("\"NOT\"") == "\"NOT\"");
  CHECK(reprint("\"teddy bear\"") == "\"teddy bear\"");

  CHECK(case_mode_of("Flu*") == CaseMode::sensitive);
  CHECK(case_mode_of("flu") == CaseMode::insensitive);
  CHECK(case_mode_of("NOT") == CaseMode::sensitive);
}

TEST_CASE("near window comes from parse options") {
  QueryNodePtr n = parse("a NEAR b", ParseOptions{3});
  CHECK(std::get<Near>(n->value).window == 3);
  CHECK_THROWS_AS(parse("a NEAR b", ParseOptions{0}), Error);
}

TEST_CASE("footnote-style OR chain of short words") {
  CHECK(reprint("the OR of OR an OR to") == "(((the OR of) OR an) OR to)");
}

TEST_CASE("parse errors carry character offsets") {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.offset;
    }
    return static_cast<std::size_t>(-1);
  };

  CHECK(offset_of("fl*") == 0);          // short wildcard prefix
  CHECK(offset_of("cat AND (dog") == 12);  // missing ')'
  CHECK(offset_of("cat ! dog") == 4);      // stray character
  CHECK(offset_of("cat AND") == 7);        // missing operand
  CHECK(offset_of("\"unterminated") == 0);
  CHECK(offset_of("\"\" AND x") == 0);     // empty quotes
  CHECK(offset_of("colo*r") == 4);         // mid-word asterisk
  CHECK(offset_of("not bad") == 0);        // bare keyword
  CHECK(offset_of("a NEAR b NEAR c") == 9);  // chained NEAR
}

TEST_CASE("NEAR operands must be atomic or disjunctive") {
  CHECK_THROWS_AS(parse("(a AND b) NEAR c"), ParseError);
  CHECK_THROWS_AS(parse("c NEAR (a AND NOT b)"), ParseError);
  CHECK_NOTHROW(parse("(a OR b) NEAR c"));
  CHECK_NOTHROW(parse("(a OR (b OR c)) NEAR \"teddy bear\""));
}

TEST_CASE("wildcard constraints in the grammar") {
  CHECK_NOTHROW(parse("Flu*"));
  CHECK_THROWS_AS(parse("fl*"), ParseError);
  CHECK_THROWS_AS(parse("\"Flu* bear\""), ParseError);
  CHECK_THROWS_AS(parse("teddy Flu*"), ParseError);
}

TEST_CASE("mixed quoted/bare adjacency is rejected") {
  CHECK_THROWS_AS(parse("foo \"bar baz\""), ParseError);
  CHECK_THROWS_AS(parse("\"bar baz\" foo"), ParseError);
}

TEST_CASE("validate re-checks invariants on hand-built ASTs") {
  CHECK(validate(*parse("(a OR b) NEAR c")).empty());
  CHECK(validate(*make_wildcard("Flu")).empty());

  auto bad_near = make_near(make_and(make_term("a"), make_term("b")),
                            make_term("c"), 10);
  auto errors = validate(*bad_near);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("NEAR operand must be atomic or OR") !=
        std::string::npos);
  CHECK(errors[0].find("((a AND b) NEAR c)") != std::string::npos);

  CHECK_FALSE(validate(*make_near(make_term("a"), make_term("b"), 0)).empty());
  CHECK_FALSE(validate(*make_wildcard("fl")).empty());
  CHECK_FALSE(validate(*make_term("two words")).empty());
  CHECK_FALSE(validate(*make_phrase({"solo"})).empty());
}

TEST_CASE("every query shape the scoring pipelines use parses") {
  const char* queries[] = {
      "levied AND imposed",
      "levied NEAR imposed",
      "(levied NEAR imposed) AND NOT ((levied OR imposed) NEAR \"not\")",
      "imposed AND NOT (imposed NEAR \"not\")",
      "(levied NEAR drain) AND syrup AND NOT ((levied OR drain) NEAR \"not\")",
      "drain AND syrup AND NOT (drain NEAR \"not\")",
      "(actress NEAR Flu*) AND glamorous",
      "actress AND glamorous",
      "(accountant NEAR Flu*) AND movie",
      "(bear NEAR Flu*) AND teddy",
      "musical instruments NEAR banana peels",
      "banana peels",
      "musical instruments NEAR coconut shells",
      "musical instruments NEAR radios",
      "(newly cut grass NEAR nice) AND smell AND NOT "
      "((newly cut grass OR nice) NEAR \"not\")",
      "newly cut grass AND smell AND NOT (newly cut grass NEAR \"not\")",
      "(newly cut grass NEAR bad) AND smell AND NOT "
      "((newly cut grass OR bad) NEAR \"not\")",
      "the OR of OR an OR to",
  };
  for (const char* q : queries) {
    CAPTURE(q);
    QueryNodePtr n;
    CHECK_NOTHROW(n = parse(q));
    CHECK(validate(*n).empty());
  }
}

TEST_CASE("canonical print round-trips") {
  SUBCASE("handwritten strings") {
    const char* queries[] = {
        "(levied NEAR imposed) AND NOT ((levied OR imposed) NEAR \"not\")",
        "musical instruments NEAR banana peels",
        "(actress NEAR Flu*) AND glamorous",
        "the OR of OR an OR to",
        "\"W.C. Fields\" AND movie",
    };
    for (const char* q : queries) {
      CAPTURE(q);
      std::string once = reprint(q);
      CHECK(reprint(once) == once);
    }
  }
  SUBCASE("random ASTs") {
    Rng rng(99);
    for (int i = 0; i < 300; ++i) {
      QueryNodePtr ast = random_query(rng, test_vocab());
      std::string printed = to_query_string(*ast);
      CAPTURE(printed);
      std::string again = to_query_string(*parse(printed));
      CHECK(again == printed);
    }
  }
}
