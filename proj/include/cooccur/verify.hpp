// Randomized equivalence checking between two HitSources (typically the
// positional index and the naive-scan oracle). Query generation is seeded
// and fully deterministic across platforms.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cooccur/corpus.hpp"
#include "cooccur/hit_source.hpp"
#include "cooccur/query.hpp"

namespace cooccur {

/// splitmix64; self-contained so seeded runs reproduce everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool one_in(std::uint64_t n) { return below(n) == 0; }

 private:
  std::uint64_t state_;
};

struct QueryGenOptions {
  int near_window = kDefaultNearWindow;
  int max_depth = 3;
};

/// Forced top-level shapes, used to guarantee coverage of the interesting
/// NEAR combinations.
enum class QueryShape { any, near_over_or, phrase_near_phrase, wildcard };

/// Generates a random valid query over the vocabulary (every result passes
/// validate()). Words are mostly drawn from vocab, with occasional case
/// flips and misses to exercise non-matching paths.
QueryNodePtr random_query(Rng& rng, const std::vector<std::string>& vocab,
                          const QueryGenOptions& opts = {},
                          QueryShape shape = QueryShape::any);

/// Distinct token surfaces, sorted, evenly sampled down to max_terms.
std::vector<std::string> corpus_vocabulary(const Corpus& corpus,
                                           std::size_t max_terms = 64);

struct VerifyMismatch {
  std::string query;
  std::uint64_t left_hits = 0;
  std::uint64_t right_hits = 0;
};

struct VerifyOutcome {
  std::uint64_t trials_run = 0;
  std::optional<VerifyMismatch> mismatch;  // set on first disagreement
  bool ok() const { return !mismatch.has_value(); }
};

/// Runs `trials` random queries against both sources, stopping at the first
/// disagreement. The shape rotation guarantees NEAR-over-OR,
/// phrase-NEAR-phrase and wildcard cases appear throughout.
VerifyOutcome verify_equivalence(const HitSource& left,
                                 const HitSource& right,
                                 const std::vector<std::string>& vocab,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const QueryGenOptions& opts = {});

}  // namespace cooccur
