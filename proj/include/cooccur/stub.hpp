// A HitSource backed by a recorded map from canonical query string to hit
// count — the stand-in for a search engine whose numbers exist only as
// published counts. Keys must be in the canonical to_query_string() form.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "cooccur/hit_source.hpp"

namespace cooccur {

class StubHitSource : public HitSource {
 public:
  /// Parses a JSON object {canonical query: count, ...}. The reserved key
  /// "__total_docs__" supplies total_docs() when present.
  static StubHitSource from_json(std::istream& in);
  static StubHitSource from_file(const std::filesystem::path& path);

  /// Throws Error when the query is not in the recorded map — a stub must
  /// never silently invent counts.
  std::uint64_t hits(const QueryNode& node) const override;

  /// Throws Error when the stub carries no "__total_docs__" entry.
  std::uint64_t total_docs() const override;

  void set_count(std::string canonical_query, std::uint64_t count);
  std::size_t size() const { return counts_.size(); }

 private:
  std::map<std::string, std::uint64_t> counts_;
  std::optional<std::uint64_t> total_docs_;
};

}  // namespace cooccur
