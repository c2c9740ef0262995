// Positional inverted index: term -> (document, positions) postings with a
// per-surface sub-index to serve case-sensitive queries. Evaluates the full
// query language; hits() counts matching documents.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cooccur/corpus.hpp"
#include "cooccur/hit_source.hpp"
#include "cooccur/query.hpp"

namespace cooccur {

inline constexpr char kIndexMagic[4] = {'P', 'M', 'I', 'X'};
inline constexpr std::uint32_t kIndexFormatVersion = 1;

struct Posting {
  std::uint32_t doc = 0;
  std::vector<std::uint32_t> positions;  // strictly increasing
};

using PostingList = std::vector<Posting>;  // sorted by doc ordinal

struct SurfaceEntry {
  std::string surface;
  PostingList postings;
};

struct TermEntry {
  std::string folded;
  std::vector<SurfaceEntry> surfaces;  // sorted by surface
  PostingList merged;                  // union over all surfaces
};

/// Immutable once built or loaded; any number of threads may call hits()
/// concurrently. No query may observe an index mid-build.
class PositionalIndex : public HitSource {
 public:
  static PositionalIndex build(const Corpus& corpus);

  /// Number of documents satisfying the query. Throws Error on an AST that
  /// violates a QueryNode invariant (never a silent zero).
  std::uint64_t hits(const QueryNode& node) const override;
  std::uint64_t total_docs() const override { return doc_ids_.size(); }

  /// Matching document ordinals, ascending.
  std::vector<std::uint32_t> matching_docs(const QueryNode& node) const;

  const std::string& doc_id(std::uint32_t ordinal) const {
    return doc_ids_[ordinal];
  }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const std::vector<TermEntry>& term_entries() const { return terms_; }

  // Binary, versioned, little-endian; see docs/index-format.md.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static PositionalIndex load(std::istream& in);
  static PositionalIndex load(const std::filesystem::path& path);

 private:
  std::vector<TermEntry> terms_;  // sorted by folded term
  std::vector<std::string> doc_ids_;
  std::uint64_t total_tokens_ = 0;
};

}  // namespace cooccur
