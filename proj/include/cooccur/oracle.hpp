// Brute-force reference evaluator: answers hits(query) by scanning every
// document token-by-token, with no index structures. Kept deliberately
// independent of the PositionalIndex implementation so the two can check
// each other.

#pragma once

#include <cstdint>

#include "cooccur/corpus.hpp"
#include "cooccur/hit_source.hpp"
#include "cooccur/query.hpp"

namespace cooccur {

std::uint64_t oracle_hits(const Corpus& corpus, const QueryNode& node);

/// True if a single document satisfies the query.
bool oracle_doc_matches(const Document& doc, const QueryNode& node);

/// HitSource adapter over a Corpus; the caller keeps the corpus alive.
class OracleHitSource : public HitSource {
 public:
  explicit OracleHitSource(const Corpus& corpus) : corpus_(&corpus) {}
  std::uint64_t hits(const QueryNode& node) const override {
    return oracle_hits(*corpus_, node);
  }
  std::uint64_t total_docs() const override { return corpus_->doc_count(); }

 private:
  const Corpus* corpus_;
};

}  // namespace cooccur
