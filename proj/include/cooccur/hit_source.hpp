#pragma once

#include <cstdint>

#include "cooccur/query.hpp"

namespace cooccur {

/// Anything that can answer hits(query): the positional index, the
/// naive-scan oracle, or a stub of recorded counts. hits() counts documents,
/// never occurrences, and hits(q) <= total_docs().
class HitSource {
 public:
  virtual ~HitSource() = default;
  virtual std::uint64_t hits(const QueryNode& node) const = 0;
  virtual std::uint64_t total_docs() const = 0;
};

}  // namespace cooccur
