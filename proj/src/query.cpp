#include "cooccur/query.hpp"

#include <cstddef>
#include <utility>

#include "cooccur/corpus.hpp"
#include "cooccur/text.hpp"

namespace cooccur {

CaseMode case_mode_of(std::string_view written) {
  return has_ascii_upper(written) ? CaseMode::sensitive
                                  : CaseMode::insensitive;
}

namespace {

QueryNodePtr wrap(QueryNode n) {
  return std::make_shared<const QueryNode>(std::move(n));
}

bool is_keyword(std::string_view word) {
  std::string f = fold_case(word);
  return f == "and" || f == "or" || f == "not" || f == "near";
}

// Lexemes ------------------------------------------------------------------

struct Lexeme {
  enum class Kind { lparen, rparen, dquote, word, wildcard, end };
  Kind kind;
  std::string surface;      // word/wildcard text (prefix for wildcard)
  std::size_t byte_offset;  // of the lexeme start
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { scan(); }
  const std::vector<Lexeme>& lexemes() const { return lexemes_; }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t byte_off) const {
    throw ParseError(msg, scalars_before(text_, byte_off), byte_off);
  }

  void scan() {
    std::size_t i = 0;
    const std::size_t n = text_.size();
    while (i < n) {
      unsigned char c = static_cast<unsigned char>(text_[i]);
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
          c == '\v') {
        ++i;
        continue;
      }
      // Apostrophes and periods outside a word are separators, exactly as
      // in tokenize() ("W.C. Fields" scans as W.C / Fields).
      if (c == '.' || c == '\'') {
        ++i;
        continue;
      }
      if (c == '(') {
        lexemes_.push_back({Lexeme::Kind::lparen, "", i});
        ++i;
        continue;
      }
      if (c == ')') {
        lexemes_.push_back({Lexeme::Kind::rparen, "", i});
        ++i;
        continue;
      }
      if (c == '"') {
        lexemes_.push_back({Lexeme::Kind::dquote, "", i});
        ++i;
        continue;
      }
      if (is_word_byte(c)) {
        std::size_t end = scan_word_end(text_, i);
        std::string word(text_.substr(i, end - i));
        if (end < n && text_[end] == '*') {
          if (end + 1 < n &&
              is_word_byte(static_cast<unsigned char>(text_[end + 1]))) {
            fail("asterisk must terminate the word (mid-word wildcards are "
                 "not supported)",
                 end);
          }
          lexemes_.push_back({Lexeme::Kind::wildcard, std::move(word), i});
          i = end + 1;
        } else {
          lexemes_.push_back({Lexeme::Kind::word, std::move(word), i});
          i = end;
        }
        continue;
      }
      fail(std::string("unexpected character '") + text_[i] + "'", i);
    }
    lexemes_.push_back({Lexeme::Kind::end, "", n});
  }

  std::string_view text_;
  std::vector<Lexeme> lexemes_;
};

// Recursive-descent parser ---------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts)
      : text_(text), opts_(opts), lexer_(text) {}

  QueryNodePtr run() {
    QueryNodePtr n = parse_or();
    if (!at(Lexeme::Kind::end)) {
      fail("expected operator or end of query", peek().byte_offset);
    }
    return n;
  }

 private:
  const Lexeme& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    const auto& lx = lexer_.lexemes();
    return i < lx.size() ? lx[i] : lx.back();
  }
  bool at(Lexeme::Kind k) const { return peek().kind == k; }
  const Lexeme& take() { return lexer_.lexemes()[pos_++]; }

  bool at_keyword(std::string_view kw) const {
    return at(Lexeme::Kind::word) && fold_case(peek().surface) == kw;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t byte_off) const {
    throw ParseError(msg, scalars_before(text_, byte_off), byte_off);
  }

  QueryNodePtr parse_or() {
    QueryNodePtr left = parse_and();
    while (at_keyword("or")) {
      take();
      left = make_or(std::move(left), parse_and());
    }
    return left;
  }

  QueryNodePtr parse_and() {
    QueryNodePtr left = parse_near();
    while (at_keyword("and")) {
      take();
      bool negated = at_keyword("not");
      if (negated) take();
      QueryNodePtr right = parse_near();
      left = negated ? make_and_not(std::move(left), std::move(right))
                     : make_and(std::move(left), std::move(right));
    }
    return left;
  }

  QueryNodePtr parse_near() {
    QueryNodePtr left = parse_operand();
    if (!at_keyword("near")) return left;
    std::size_t op_off = take().byte_offset;
    QueryNodePtr right = parse_operand();
    if (!is_atomic_or_disjunctive(*left) || !is_atomic_or_disjunctive(*right)) {
      fail("NEAR operand must be a term, phrase, wildcard or OR of those",
           op_off);
    }
    if (at_keyword("near")) {
      fail("NEAR cannot be chained; parenthesize or use AND",
           peek().byte_offset);
    }
    return make_near(std::move(left), std::move(right), opts_.near_window);
  }

  QueryNodePtr parse_operand() {
    if (at(Lexeme::Kind::lparen)) {
      take();
      QueryNodePtr inner = parse_or();
      if (!at(Lexeme::Kind::rparen)) {
        fail("expected ')'", peek().byte_offset);
      }
      take();
      return inner;
    }
    if (at(Lexeme::Kind::dquote)) return parse_quoted();
    if (at(Lexeme::Kind::word) || at(Lexeme::Kind::wildcard)) {
      if (at(Lexeme::Kind::word) && is_keyword(peek().surface)) {
        fail("unexpected keyword '" + peek().surface +
                 "' (quote it to search for the word itself)",
             peek().byte_offset);
      }
      return parse_bare_words();
    }
    fail("expected a term, phrase, wildcard or '('", peek().byte_offset);
  }

  QueryNodePtr parse_quoted() {
    std::size_t open_off = take().byte_offset;  // consume '"'
    std::vector<std::string> words;
    while (true) {
      if (at(Lexeme::Kind::dquote)) {
        take();
        break;
      }
      if (at(Lexeme::Kind::word)) {
        words.push_back(take().surface);
        continue;
      }
      if (at(Lexeme::Kind::wildcard)) {
        fail("wildcard is not allowed inside a phrase", peek().byte_offset);
      }
      if (at(Lexeme::Kind::end)) {
        fail("unterminated quote", open_off);
      }
      fail("expected a word or closing quote", peek().byte_offset);
    }
    if (words.empty()) fail("empty quotes", open_off);
    if (words.size() == 1) return make_term(std::move(words.front()));
    return make_phrase(std::move(words));
  }

  // One or more adjacent unquoted words form a phrase; a wildcard must
  // stand alone.
  QueryNodePtr parse_bare_words() {
    if (at(Lexeme::Kind::wildcard)) {
      const Lexeme& lx = take();
      check_wildcard_prefix(lx);
      if ((at(Lexeme::Kind::word) && !is_keyword(peek().surface)) ||
          at(Lexeme::Kind::wildcard)) {
        fail("wildcard is not allowed inside a phrase", peek().byte_offset);
      }
      return make_wildcard(lx.surface);
    }
    std::vector<std::string> words;
    words.push_back(take().surface);
    while (true) {
      if (at(Lexeme::Kind::word) && !is_keyword(peek().surface)) {
        words.push_back(take().surface);
        continue;
      }
      if (at(Lexeme::Kind::wildcard)) {
        fail("wildcard is not allowed inside a phrase", peek().byte_offset);
      }
      break;
    }
    if (words.size() == 1) return make_term(std::move(words.front()));
    return make_phrase(std::move(words));
  }

  void check_wildcard_prefix(const Lexeme& lx) const {
    if (scalar_count(lx.surface) < kMinWildcardPrefix) {
      fail("wildcard must be preceded by at least three characters",
           lx.byte_offset);
    }
  }

  std::string_view text_;
  ParseOptions opts_;
  Lexer lexer_;
  std::size_t pos_ = 0;
};

bool is_single_word(std::string_view s) {
  if (s.empty()) return false;
  if (!is_word_byte(static_cast<unsigned char>(s[0]))) return false;
  return scan_word_end(s, 0) == s.size();
}

void validate_into(const QueryNode& node, std::vector<std::string>& out);

void validate_term(const Term& t, std::vector<std::string>& out) {
  if (!is_single_word(t.surface)) {
    out.push_back("term is not a single word: '" + t.surface + "'");
  }
}

void validate_into(const QueryNode& node, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term>) {
          validate_term(n, out);
        } else if constexpr (std::is_same_v<T, Phrase>) {
          if (n.terms.size() < 2) {
            out.push_back("phrase must have at least two words: " +
                          to_query_string(node));
          }
          for (const Term& t : n.terms) validate_term(t, out);
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          if (!is_single_word(n.prefix)) {
            out.push_back("wildcard prefix is not a single word: '" +
                          n.prefix + "'");
          } else if (scalar_count(n.prefix) < kMinWildcardPrefix) {
            out.push_back(
                "wildcard must be preceded by at least three characters: '" +
                n.prefix + "*'");
          }
        } else if constexpr (std::is_same_v<T, Near>) {
          if (n.window <= 0) {
            out.push_back("NEAR window must be positive: " +
                          to_query_string(node));
          }
          if (!n.left || !n.right) {
            out.push_back("NEAR operand missing");
            return;
          }
          if (!is_atomic_or_disjunctive(*n.left) ||
              !is_atomic_or_disjunctive(*n.right)) {
            out.push_back("NEAR operand must be atomic or OR: " +
                          to_query_string(node));
          }
          validate_into(*n.left, out);
          validate_into(*n.right, out);
        } else {
          if (!n.left || !n.right) {
            out.push_back("operator with missing operand");
            return;
          }
          validate_into(*n.left, out);
          validate_into(*n.right, out);
        }
      },
      node.value);
}

void print_into(const QueryNode& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term>) {
          if (is_keyword(n.surface)) {
            out += '"';
            out += n.surface;
            out += '"';
          } else {
            out += n.surface;
          }
        } else if constexpr (std::is_same_v<T, Phrase>) {
          out += '"';
          for (std::size_t i = 0; i < n.terms.size(); ++i) {
            if (i) out += ' ';
            out += n.terms[i].surface;
          }
          out += '"';
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          out += n.prefix;
          out += '*';
        } else {
          const char* op = std::is_same_v<T, Or>       ? " OR "
                           : std::is_same_v<T, And>    ? " AND "
                           : std::is_same_v<T, AndNot> ? " AND NOT "
                                                       : " NEAR ";
          out += '(';
          print_into(*n.left, out);
          out += op;
          print_into(*n.right, out);
          out += ')';
        }
      },
      node.value);
}

}  // namespace

QueryNodePtr make_term(std::string surface) {
  return wrap(QueryNode{Term{std::move(surface)}});
}

QueryNodePtr make_phrase(std::vector<std::string> words) {
  Phrase p;
  p.terms.reserve(words.size());
  for (auto& w : words) p.terms.push_back(Term{std::move(w)});
  return wrap(QueryNode{std::move(p)});
}

QueryNodePtr make_wildcard(std::string prefix) {
  return wrap(QueryNode{Wildcard{std::move(prefix)}});
}

QueryNodePtr make_or(QueryNodePtr l, QueryNodePtr r) {
  return wrap(QueryNode{Or{std::move(l), std::move(r)}});
}

QueryNodePtr make_and(QueryNodePtr l, QueryNodePtr r) {
  return wrap(QueryNode{And{std::move(l), std::move(r)}});
}

QueryNodePtr make_and_not(QueryNodePtr l, QueryNodePtr r) {
  return wrap(QueryNode{AndNot{std::move(l), std::move(r)}});
}

QueryNodePtr make_near(QueryNodePtr l, QueryNodePtr r, int window) {
  return wrap(QueryNode{Near{std::move(l), std::move(r), window}});
}

bool is_atomic_or_disjunctive(const QueryNode& node) {
  return std::visit(
      [](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term> || std::is_same_v<T, Phrase> ||
                      std::is_same_v<T, Wildcard>) {
          return true;
        } else if constexpr (std::is_same_v<T, Or>) {
          return n.left && n.right && is_atomic_or_disjunctive(*n.left) &&
                 is_atomic_or_disjunctive(*n.right);
        } else {
          return false;
        }
      },
      node.value);
}

QueryNodePtr parse(std::string_view text, const ParseOptions& opts) {
  if (opts.near_window <= 0) {
    throw Error("NEAR window must be positive, got " +
                std::to_string(opts.near_window));
  }
  if (auto bad = find_invalid_utf8(text)) {
    throw ParseError("query text is not valid UTF-8", scalars_before(text, *bad),
                     *bad);
  }
  return Parser(text, opts).run();
}

std::vector<std::string> validate(const QueryNode& node) {
  std::vector<std::string> out;
  validate_into(node, out);
  return out;
}

std::string to_query_string(const QueryNode& node) {
  std::string out;
  print_into(node, out);
  return out;
}

}  // namespace cooccur
