// Association-rating pipelines: batch-relative linear mapping of
// co-occurrence probabilities onto a 1..10 scale, and polarity rating of a
// phrase between a positive and a negative label. Ratings are floored to
// integers; a batch with no spread (or a polarity item with no signal)
// rates 5.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cooccur/hit_source.hpp"
#include "cooccur/query.hpp"

namespace cooccur {

/// One conditioning pair: how strongly `target` associates with `anchor`,
/// optionally restricted to documents containing `context`.
struct AssociationItem {
  std::string anchor;                  // word or phrase, e.g. "actress"
  std::string target;                  // word, phrase or wildcard, "Flu*"
  std::optional<std::string> context;  // single word, e.g. "glamorous"
};

struct ProbEstimate {
  double p = 0.0;
  std::uint64_t numerator_hits = 0;
  std::uint64_t denominator_hits = 0;
  std::string numerator_query;
  std::string denominator_query;
  bool degenerate = false;  // zero denominator; p reported as 0
};

/// With context:    hits((anchor NEAR target) AND context) /
///                  hits(anchor AND context)
/// Without context: hits(target NEAR anchor) / hits(anchor)
ProbEstimate assoc_prob(const HitSource& source, const AssociationItem& item,
                        int near_window = kDefaultNearWindow);

struct Rating {
  int value = 0;  // integer in [1, 10]
  double raw = 0.0;
};

/// raw_i = 1 + 9 * (p_i - min) / (max - min), floored; a batch with
/// max == min rates every item 5. Throws Error on an empty batch.
std::vector<Rating> rate_linear(const std::vector<double>& probs);

struct PolarityItem {
  std::string phrase;
  std::string context;         // e.g. "smell"
  std::string positive_label;  // e.g. "nice"
  std::string negative_label;  // e.g. "bad"
};

/// p_pos = hits((phrase NEAR pos) AND context AND NOT ((phrase OR pos)
///         NEAR "not")) / hits(phrase AND context AND NOT (phrase NEAR
///         "not")), and symmetrically for p_neg.
std::pair<ProbEstimate, ProbEstimate> polarity_probs(
    const HitSource& source, const PolarityItem& item,
    int near_window = kDefaultNearWindow);

/// Both zero -> 5; otherwise floor(1 + 9 * p_pos / (p_pos + p_neg)).
Rating rate_polarity(double p_pos, double p_neg);

enum class RatingTaskKind { linear, polarity };

struct RatingItemReport {
  std::string label;  // the item's anchor or phrase, as written
  std::vector<ProbEstimate> probs;  // 1 for linear, 2 (pos, neg) for polarity
  Rating rating;
  bool degenerate = false;
};

struct RatingReport {
  RatingTaskKind kind = RatingTaskKind::linear;
  std::vector<RatingItemReport> items;
};

/// Task file: JSON Lines. First line a header {"kind": "linear"} or
/// {"kind": "polarity", "labels": {"positive": ..., "negative": ...}};
/// following lines one item each. Throws IoError with the line number on
/// malformed input and Error on an empty item list.
RatingReport run_rating_task(const HitSource& source, std::istream& in,
                             int near_window = kDefaultNearWindow);

/// Stable, fully ordered JSON rendering with per-item provenance (every
/// query string, every hit count, raw values).
nlohmann::ordered_json to_json(const RatingReport& report);

}  // namespace cooccur
