#include "cooccur/stub.hpp"

#include <fstream>

#include <json.hpp>

#include "cooccur/errors.hpp"

namespace cooccur {

namespace {
constexpr const char* kTotalDocsKey = "__total_docs__";
}

StubHitSource StubHitSource::from_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("stub hits file is not valid JSON: ") +
                  e.what());
  }
  if (!doc.is_object()) {
    throw IoError("stub hits file must be a JSON object of "
                  "{\"query\": count}");
  }
  StubHitSource stub;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number_unsigned()) {
      throw IoError("stub hit count for \"" + key +
                    "\" must be a non-negative integer");
    }
    if (key == kTotalDocsKey) {
      stub.total_docs_ = value.get<std::uint64_t>();
    } else {
      stub.counts_[key] = value.get<std::uint64_t>();
    }
  }
  return stub;
}

StubHitSource StubHitSource::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stub hits file: " + path.string());
  return from_json(in);
}

std::uint64_t StubHitSource::hits(const QueryNode& node) const {
  const std::string key = to_query_string(node);
  auto it = counts_.find(key);
  if (it == counts_.end()) {
    throw Error("stub has no recorded count for query: " + key);
  }
  return it->second;
}

std::uint64_t StubHitSource::total_docs() const {
  if (!total_docs_) {
    throw Error(std::string("stub has no document count (add a \"") +
                kTotalDocsKey + "\" entry to use it where N is needed)");
  }
  return *total_docs_;
}

void StubHitSource::set_count(std::string canonical_query,
                              std::uint64_t count) {
  counts_[std::move(canonical_query)] = count;
}

}  // namespace cooccur
