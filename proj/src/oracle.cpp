#include "cooccur/oracle.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "cooccur/errors.hpp"

namespace cooccur {

namespace {

// Self-contained character helpers: the oracle does its own comparisons
// rather than reusing the index's folding tables.

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool any_upper(std::string_view s) {
  for (char c : s) {
    if (c >= 'A' && c <= 'Z') return true;
  }
  return false;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (lower(s[i]) != lower(prefix[i])) return false;
  }
  return true;
}

std::size_t count_scalars(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool token_matches_term(std::string_view token, std::string_view written) {
  if (any_upper(written)) return token == written;
  return iequals(token, written);
}

bool token_matches_wildcard(std::string_view token, std::string_view prefix) {
  if (any_upper(prefix)) {
    if (token.size() < prefix.size() ||
        token.substr(0, prefix.size()) != prefix) {
      return false;
    }
  } else if (!istarts_with(token, prefix)) {
    return false;
  }
  std::size_t extra =
      count_scalars(token.substr(prefix.size()));
  return extra <= kMaxWildcardSuffix;
}

struct TokenSpan {
  std::uint32_t first;
  std::uint32_t last;
};

void collect_occurrences(const Document& doc, const QueryNode& node,
                         std::vector<TokenSpan>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term>) {
          for (std::uint32_t i = 0; i < doc.tokens.size(); ++i) {
            if (token_matches_term(doc.tokens[i].surface, n.surface)) {
              out.push_back(TokenSpan{i, i});
            }
          }
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          for (std::uint32_t i = 0; i < doc.tokens.size(); ++i) {
            if (token_matches_wildcard(doc.tokens[i].surface, n.prefix)) {
              out.push_back(TokenSpan{i, i});
            }
          }
        } else if constexpr (std::is_same_v<T, Phrase>) {
          const std::size_t len = n.terms.size();
          if (doc.tokens.size() < len) return;
          for (std::uint32_t start = 0;
               start + len <= doc.tokens.size(); ++start) {
            bool ok = true;
            for (std::size_t k = 0; k < len; ++k) {
              if (!token_matches_term(doc.tokens[start + k].surface,
                                      n.terms[k].surface)) {
                ok = false;
                break;
              }
            }
            if (ok) {
              out.push_back(TokenSpan{
                  start, start + static_cast<std::uint32_t>(len) - 1});
            }
          }
        } else if constexpr (std::is_same_v<T, Or>) {
          collect_occurrences(doc, *n.left, out);
          collect_occurrences(doc, *n.right, out);
        } else {
          // Near operands are validated to be atomic-or-disjunctive.
          std::abort();
        }
      },
      node.value);
}

bool spans_within(const std::vector<TokenSpan>& a,
                  const std::vector<TokenSpan>& b, std::uint32_t window) {
  for (const TokenSpan& sa : a) {
    for (const TokenSpan& sb : b) {
      std::uint32_t dist;
      if (sa.first <= sb.last && sb.first <= sa.last) {
        dist = 0;
      } else if (sa.last < sb.first) {
        dist = sb.first - sa.last;
      } else {
        dist = sa.first - sb.last;
      }
      if (dist <= window) return true;
    }
  }
  return false;
}

bool doc_matches(const Document& doc, const QueryNode& node) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term> || std::is_same_v<T, Phrase> ||
                      std::is_same_v<T, Wildcard>) {
          std::vector<TokenSpan> occ;
          collect_occurrences(doc, node, occ);
          return !occ.empty();
        } else if constexpr (std::is_same_v<T, Or>) {
          return doc_matches(doc, *n.left) || doc_matches(doc, *n.right);
        } else if constexpr (std::is_same_v<T, And>) {
          return doc_matches(doc, *n.left) && doc_matches(doc, *n.right);
        } else if constexpr (std::is_same_v<T, AndNot>) {
          return doc_matches(doc, *n.left) && !doc_matches(doc, *n.right);
        } else {
          std::vector<TokenSpan> a, b;
          collect_occurrences(doc, *n.left, a);
          if (a.empty()) return false;
          collect_occurrences(doc, *n.right, b);
          if (b.empty()) return false;
          return spans_within(a, b, static_cast<std::uint32_t>(n.window));
        }
      },
      node.value);
}

}  // namespace

bool oracle_doc_matches(const Document& doc, const QueryNode& node) {
  return doc_matches(doc, node);
}

std::uint64_t oracle_hits(const Corpus& corpus, const QueryNode& node) {
  std::vector<std::string> errors = validate(node);
  if (!errors.empty()) {
    throw Error("invalid query: " + errors.front());
  }
  std::uint64_t count = 0;
  for (const Document& doc : corpus.documents()) {
    if (doc_matches(doc, node)) ++count;
  }
  return count;
}

}  // namespace cooccur
