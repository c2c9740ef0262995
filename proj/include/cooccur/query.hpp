// The advanced-search query language: AST, parser, validator and the
// canonical printer. Operators: AND, OR, AND NOT, NEAR, quoted phrases and
// trailing-asterisk prefix wildcards.
//
// Precedence: NEAR > AND = AND NOT > OR, left-associative, parentheses
// override. Keywords are case-insensitive and reserved; quoting a word
// suppresses keyword interpretation. Adjacent bare words (or words inside
// double quotes) form a phrase.
//
// Case rule: a written term containing an ASCII uppercase letter matches
// case-sensitively; an all-lowercase term matches any casing.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cooccur/errors.hpp"

namespace cooccur {

inline constexpr int kDefaultNearWindow = 10;
inline constexpr std::size_t kMinWildcardPrefix = 3;  // scalars
inline constexpr std::size_t kMaxWildcardSuffix = 5;  // scalars

struct QueryNode;
using QueryNodePtr = std::shared_ptr<const QueryNode>;

struct Term {
  std::string surface;
};

struct Phrase {
  std::vector<Term> terms;  // length >= 2
};

/// Matches tokens whose surface is prefix + 0..5 further scalars.
struct Wildcard {
  std::string prefix;  // >= 3 scalars
};

struct Or {
  QueryNodePtr left, right;
};
struct And {
  QueryNodePtr left, right;
};
struct AndNot {
  QueryNodePtr left, right;
};

/// Both operands occur with span distance <= window, in either order.
/// Operands must be atomic-or-disjunctive: Term, Phrase, Wildcard or an
/// Or-tree over those.
struct Near {
  QueryNodePtr left, right;
  int window = kDefaultNearWindow;
};

struct QueryNode {
  std::variant<Term, Phrase, Wildcard, Or, And, AndNot, Near> value;
};

enum class CaseMode { sensitive, insensitive };

/// SENSITIVE iff the written form contains an ASCII uppercase letter.
CaseMode case_mode_of(std::string_view written);

// AST builders.
QueryNodePtr make_term(std::string surface);
QueryNodePtr make_phrase(std::vector<std::string> words);
QueryNodePtr make_wildcard(std::string prefix);
QueryNodePtr make_or(QueryNodePtr l, QueryNodePtr r);
QueryNodePtr make_and(QueryNodePtr l, QueryNodePtr r);
QueryNodePtr make_and_not(QueryNodePtr l, QueryNodePtr r);
QueryNodePtr make_near(QueryNodePtr l, QueryNodePtr r,
                       int window = kDefaultNearWindow);

struct ParseOptions {
  int near_window = kDefaultNearWindow;
};

/// Parses query text into an AST. Throws ParseError with the offending
/// character offset on syntax errors.
QueryNodePtr parse(std::string_view text, const ParseOptions& opts = {});

/// Re-checks every QueryNode invariant on an arbitrary (possibly hand-built)
/// AST. Returns one message per violation, identifying the subtree; empty
/// means ok.
std::vector<std::string> validate(const QueryNode& node);

/// The canonical serialization: binary operators fully parenthesized,
/// phrases quoted, keyword-colliding terms quoted. parse(to_query_string(n))
/// reproduces the structure of n. This string is the normative key format
/// for stub hit-count files.
std::string to_query_string(const QueryNode& node);

bool is_atomic_or_disjunctive(const QueryNode& node);

}  // namespace cooccur
