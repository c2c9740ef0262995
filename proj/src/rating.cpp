#include "cooccur/rating.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "cooccur/errors.hpp"
#include "cooccur/scoring.hpp"

namespace cooccur {

namespace {

int clamp_rating(double raw) {
  int v = static_cast<int>(std::floor(raw));
  return std::max(1, std::min(10, v));
}

ProbEstimate ratio_estimate(const HitSource& source, QueryNodePtr numerator,
                            QueryNodePtr denominator) {
  ProbEstimate est;
  est.numerator_query = to_query_string(*numerator);
  est.denominator_query = to_query_string(*denominator);
  est.numerator_hits = source.hits(*numerator);
  est.denominator_hits = source.hits(*denominator);
  if (est.denominator_hits == 0) {
    est.degenerate = true;
    est.p = 0.0;
  } else {
    est.p = static_cast<double>(est.numerator_hits) /
            static_cast<double>(est.denominator_hits);
  }
  return est;
}

}  // namespace

ProbEstimate assoc_prob(const HitSource& source, const AssociationItem& item,
                        int near_window) {
  if (item.anchor.empty() || item.target.empty()) {
    throw Error("association item needs both an anchor and a target");
  }
  QueryNodePtr anchor = parse_atom(item.anchor);
  QueryNodePtr target = parse_atom(item.target);

  if (item.context) {
    QueryNodePtr ctx = parse_atom(*item.context);
    if (!std::holds_alternative<Term>(ctx->value)) {
      throw Error("context must be a single word: '" + *item.context + "'");
    }
    return ratio_estimate(
        source, make_and(make_near(anchor, target, near_window), ctx),
        make_and(anchor, ctx));
  }
  return ratio_estimate(source, make_near(target, anchor, near_window),
                        anchor);
}

std::vector<Rating> rate_linear(const std::vector<double>& probs) {
  if (probs.empty()) throw Error("cannot rate an empty batch");
  const double lo = *std::min_element(probs.begin(), probs.end());
  const double hi = *std::max_element(probs.begin(), probs.end());
  std::vector<Rating> ratings;
  ratings.reserve(probs.size());
  if (hi == lo) {
    // No spread: the linear map is undefined, report the scale midpoint.
    for (std::size_t i = 0; i < probs.size(); ++i) {
      ratings.push_back(Rating{5, 5.0});
    }
    return ratings;
  }
  for (double p : probs) {
    // Dividing before multiplying keeps the endpoints exact: the minimum
    // maps to 1.0 and the maximum to 10.0 with no rounding residue.
    double raw = 1.0 + 9.0 * ((p - lo) / (hi - lo));
    ratings.push_back(Rating{clamp_rating(raw), raw});
  }
  return ratings;
}

std::pair<ProbEstimate, ProbEstimate> polarity_probs(const HitSource& source,
                                                     const PolarityItem& item,
                                                     int near_window) {
  if (item.positive_label == item.negative_label) {
    throw Error("polarity labels must be distinct");
  }
  QueryNodePtr phrase = parse_atom(item.phrase);
  QueryNodePtr ctx = parse_atom(item.context);
  QueryNodePtr not_word = make_term("not");

  QueryNodePtr denominator = make_and_not(
      make_and(phrase, ctx), make_near(phrase, not_word, near_window));

  auto numerator = [&](const std::string& label) {
    QueryNodePtr lab = parse_atom(label);
    return make_and_not(
        make_and(make_near(phrase, lab, near_window), ctx),
        make_near(make_or(phrase, lab), not_word, near_window));
  };

  ProbEstimate pos =
      ratio_estimate(source, numerator(item.positive_label), denominator);
  ProbEstimate neg =
      ratio_estimate(source, numerator(item.negative_label), denominator);
  return {pos, neg};
}

Rating rate_polarity(double p_pos, double p_neg) {
  if (p_pos < 0.0 || p_neg < 0.0) {
    throw Error("polarity probabilities must be non-negative");
  }
  if (p_pos == 0.0 && p_neg == 0.0) {
    return Rating{5, 5.0};
  }
  double raw = 1.0 + 9.0 * (p_pos / (p_pos + p_neg));
  return Rating{clamp_rating(raw), raw};
}

namespace {

nlohmann::json parse_json_line(const std::string& line, std::size_t line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("task file line " + std::to_string(line_no) +
                  ": invalid JSON: " + e.what());
  }
}

std::string require_string(const nlohmann::json& obj, const char* field,
                           std::size_t line_no) {
  if (!obj.contains(field) || !obj[field].is_string()) {
    throw IoError("task file line " + std::to_string(line_no) +
                  ": missing string field \"" + field + "\"");
  }
  return obj[field].get<std::string>();
}

}  // namespace

RatingReport run_rating_task(const HitSource& source, std::istream& in,
                             int near_window) {
  std::string line;
  std::size_t line_no = 0;

  // Header line.
  nlohmann::json header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    header = parse_json_line(line, line_no);
    break;
  }
  if (header.is_null()) throw IoError("task file is empty");
  std::string kind = require_string(header, "kind", line_no);

  RatingReport report;
  std::string positive = "nice", negative = "bad";
  if (kind == "linear") {
    report.kind = RatingTaskKind::linear;
  } else if (kind == "polarity") {
    report.kind = RatingTaskKind::polarity;
    if (header.contains("labels")) {
      const auto& labels = header["labels"];
      if (!labels.is_object()) {
        throw IoError("task file line " + std::to_string(line_no) +
                      ": \"labels\" must be an object");
      }
      if (labels.contains("positive")) {
        positive = labels["positive"].get<std::string>();
      }
      if (labels.contains("negative")) {
        negative = labels["negative"].get<std::string>();
      }
    }
  } else {
    throw IoError("task file line " + std::to_string(line_no) +
                  ": unknown task kind \"" + kind +
                  "\" (expected \"linear\" or \"polarity\")");
  }

  // Item lines.
  std::vector<nlohmann::json> items;
  std::vector<std::size_t> item_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    items.push_back(parse_json_line(line, line_no));
    item_lines.push_back(line_no);
  }
  if (items.empty()) throw IoError("task file has no items");

  if (report.kind == RatingTaskKind::linear) {
    std::vector<double> probs;
    for (std::size_t i = 0; i < items.size(); ++i) {
      AssociationItem item;
      item.anchor = require_string(items[i], "anchor", item_lines[i]);
      item.target = require_string(items[i], "target", item_lines[i]);
      if (items[i].contains("context")) {
        item.context = require_string(items[i], "context", item_lines[i]);
      }
      ProbEstimate est = assoc_prob(source, item, near_window);
      probs.push_back(est.p);
      RatingItemReport rep;
      rep.label = item.anchor;
      rep.degenerate = est.degenerate;
      rep.probs.push_back(std::move(est));
      report.items.push_back(std::move(rep));
    }
    std::vector<Rating> ratings = rate_linear(probs);
    for (std::size_t i = 0; i < ratings.size(); ++i) {
      report.items[i].rating = ratings[i];
    }
    return report;
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    PolarityItem item;
    item.phrase = require_string(items[i], "phrase", item_lines[i]);
    item.context = require_string(items[i], "context", item_lines[i]);
    item.positive_label = positive;
    item.negative_label = negative;
    auto [pos, neg] = polarity_probs(source, item, near_window);
    RatingItemReport rep;
    rep.label = item.phrase;
    rep.degenerate = pos.degenerate || neg.degenerate;
    rep.rating = rate_polarity(pos.p, neg.p);
    rep.probs.push_back(std::move(pos));
    rep.probs.push_back(std::move(neg));
    report.items.push_back(std::move(rep));
  }
  return report;
}

nlohmann::ordered_json to_json(const RatingReport& report) {
  nlohmann::ordered_json out;
  out["kind"] =
      report.kind == RatingTaskKind::linear ? "linear" : "polarity";
  out["items"] = nlohmann::ordered_json::array();
  for (const RatingItemReport& item : report.items) {
    nlohmann::ordered_json j;
    j["label"] = item.label;
    const char* names[2] = {"positive", "negative"};
    if (report.kind == RatingTaskKind::linear) {
      const ProbEstimate& est = item.probs.at(0);
      j["queries"] = {{"numerator", est.numerator_query},
                      {"denominator", est.denominator_query}};
      j["hits"] = {{"numerator", est.numerator_hits},
                   {"denominator", est.denominator_hits}};
      j["probability"] = est.p;
    } else {
      j["queries"] = nlohmann::ordered_json::object();
      j["hits"] = nlohmann::ordered_json::object();
      j["probability"] = nlohmann::ordered_json::object();
      for (int k = 0; k < 2; ++k) {
        const ProbEstimate& est = item.probs.at(k);
        j["queries"][names[k]] = {{"numerator", est.numerator_query},
                                  {"denominator", est.denominator_query}};
        j["hits"][names[k]] = {{"numerator", est.numerator_hits},
                               {"denominator", est.denominator_hits}};
        j["probability"][names[k]] = est.p;
      }
    }
    j["raw"] = item.rating.raw;
    j["rating"] = item.rating.value;
    j["flags"] = nlohmann::ordered_json::array();
    if (item.degenerate) j["flags"].push_back("degenerate");
    out["items"].push_back(std::move(j));
  }
  return out;
}

}  // namespace cooccur
