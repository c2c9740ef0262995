// Tokenized documents with stable ordinal positions — the substrate every
// positional query runs against.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cooccur {

struct Token {
  std::string surface;  // original case preserved
  std::uint32_t position = 0;
};

struct Document {
  std::string doc_id;
  std::vector<Token> tokens;
};

/// A token is a maximal run of letters/digits plus apostrophes and periods
/// that have a word character on both sides, so "child's" and "W.C" survive
/// as single tokens while a trailing period is a separator.
std::vector<Token> tokenize(std::string_view text);

// Scans one token starting at `start` (which must be a word byte); returns
// the end byte offset. Shared with the query lexer so query terms and corpus
// tokens agree.
std::size_t scan_word_end(std::string_view text, std::size_t start);

/// An immutable, ordered set of documents. Safe for concurrent readers once
/// constructed.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {}

  const std::vector<Document>& documents() const { return docs_; }
  std::uint64_t doc_count() const { return docs_.size(); }
  std::uint64_t token_count() const;

  /// Convenience builder: tokenizes each (doc_id, text) pair in order.
  static Corpus from_texts(
      const std::vector<std::pair<std::string, std::string>>& texts);

 private:
  std::vector<Document> docs_;
};

/// One document per *.txt file (recursive), doc_id = relative path,
/// documents ordered lexicographically by doc_id.
Corpus ingest_directory(const std::filesystem::path& dir);

/// One document per line, doc_id = "line-<1-based line number>". Blank lines
/// become empty documents and still count toward N.
Corpus ingest_lines(const std::filesystem::path& file);

class StopWordList {
 public:
  /// Built-in list of common English function words.
  static const StopWordList& defaults();

  /// One word per line, '#' lines are comments, blank lines skipped.
  static StopWordList from_file(const std::filesystem::path& path);

  explicit StopWordList(std::vector<std::string> words);

  /// Case-insensitive membership test.
  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace cooccur
