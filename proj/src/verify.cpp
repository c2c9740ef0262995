#include "cooccur/verify.hpp"

#include <algorithm>
#include <set>

#include "cooccur/text.hpp"

namespace cooccur {

namespace {

const std::vector<std::string>& fallback_vocab() {
  static const std::vector<std::string> words = {
      "cat", "dog",  "Flugly", "flux",  "the", "not",
      "W.C", "bear", "teddy",  "smell", "abc", "Banana"};
  return words;
}

class QueryGen {
 public:
  QueryGen(Rng& rng, const std::vector<std::string>& vocab,
           const QueryGenOptions& opts)
      : rng_(rng),
        vocab_(vocab.empty() ? fallback_vocab() : vocab),
        opts_(opts) {}

  QueryNodePtr generate(QueryShape shape) {
    switch (shape) {
      case QueryShape::near_over_or:
        return make_near(or_tree(2), or_tree(rng_.one_in(2) ? 1 : 0),
                         window());
      case QueryShape::phrase_near_phrase:
        return make_near(phrase(), phrase(), window());
      case QueryShape::wildcard:
        switch (rng_.below(3)) {
          case 0:
            return wildcard();
          case 1:
            return make_and(wildcard(), node(1));
          default:
            return make_near(wildcard(), atom(), window());
        }
      case QueryShape::any:
        break;
    }
    return node(opts_.max_depth);
  }

 private:
  std::string word() {
    std::string w = vocab_[rng_.below(vocab_.size())];
    // Occasionally perturb so unmatched terms and case variants show up.
    if (rng_.one_in(8)) w += "x";
    if (rng_.one_in(6) && !w.empty()) {
      char& c = w.front();
      if (c >= 'a' && c <= 'z') {
        c = static_cast<char>(c - 'a' + 'A');
      } else if (c >= 'A' && c <= 'Z') {
        c = static_cast<char>(c - 'A' + 'a');
      }
    }
    return w;
  }

  QueryNodePtr term() { return make_term(word()); }

  QueryNodePtr phrase() {
    std::size_t len = 2 + rng_.below(2);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < len; ++i) words.push_back(word());
    return make_phrase(std::move(words));
  }

  QueryNodePtr wildcard() {
    // Pick a word with at least three scalars, or fall back to a literal.
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::string w = word();
      std::size_t scalars = scalar_count(w);
      if (scalars < kMinWildcardPrefix) continue;
      std::size_t keep =
          kMinWildcardPrefix + rng_.below(scalars - kMinWildcardPrefix + 1);
      w.resize(scalar_offset(w, keep));
      return make_wildcard(std::move(w));
    }
    return make_wildcard("abc");
  }

  QueryNodePtr atom() {
    switch (rng_.below(4)) {
      case 0:
        return phrase();
      case 1:
        return wildcard();
      default:
        return term();
    }
  }

  QueryNodePtr or_tree(int depth) {
    if (depth <= 0 || rng_.one_in(3)) return atom();
    return make_or(or_tree(depth - 1), or_tree(depth - 1));
  }

  int window() {
    // Mostly the default, with boundary-adjacent values mixed in.
    static const int choices[] = {1, 2, 5, 9, 10, 10, 10, 11, 12};
    return choices[rng_.below(std::size(choices))];
  }

  QueryNodePtr node(int depth) {
    if (depth <= 0) return atom();
    switch (rng_.below(8)) {
      case 0:
        return make_or(node(depth - 1), node(depth - 1));
      case 1:
        return make_and(node(depth - 1), node(depth - 1));
      case 2:
        return make_and_not(node(depth - 1), node(depth - 1));
      case 3:
      case 4:
        return make_near(or_tree(1), or_tree(1), window());
      default:
        return atom();
    }
  }

  Rng& rng_;
  const std::vector<std::string>& vocab_;
  QueryGenOptions opts_;
};

}  // namespace

QueryNodePtr random_query(Rng& rng, const std::vector<std::string>& vocab,
                          const QueryGenOptions& opts, QueryShape shape) {
  return QueryGen(rng, vocab, opts).generate(shape);
}

std::vector<std::string> corpus_vocabulary(const Corpus& corpus,
                                           std::size_t max_terms) {
  std::set<std::string> surfaces;
  for (const Document& doc : corpus.documents()) {
    for (const Token& t : doc.tokens) surfaces.insert(t.surface);
  }
  std::vector<std::string> vocab(surfaces.begin(), surfaces.end());
  if (max_terms == 0 || vocab.size() <= max_terms) return vocab;
  std::vector<std::string> sampled;
  sampled.reserve(max_terms);
  for (std::size_t i = 0; i < max_terms; ++i) {
    sampled.push_back(vocab[i * vocab.size() / max_terms]);
  }
  return sampled;
}

VerifyOutcome verify_equivalence(const HitSource& left, const HitSource& right,
                                 const std::vector<std::string>& vocab,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const QueryGenOptions& opts) {
  Rng rng(seed);
  VerifyOutcome outcome;
  for (std::uint64_t i = 0; i < trials; ++i) {
    QueryShape shape = QueryShape::any;
    switch (i % 10) {
      case 3:
        shape = QueryShape::near_over_or;
        break;
      case 6:
        shape = QueryShape::phrase_near_phrase;
        break;
      case 9:
        shape = QueryShape::wildcard;
        break;
      default:
        break;
    }
    QueryNodePtr q = random_query(rng, vocab, opts, shape);
    std::uint64_t l = left.hits(*q);
    std::uint64_t r = right.hits(*q);
    ++outcome.trials_run;
    if (l != r) {
      outcome.mismatch = VerifyMismatch{to_query_string(*q), l, r};
      return outcome;
    }
  }
  return outcome;
}

}  // namespace cooccur
