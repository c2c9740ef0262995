#include "cooccur/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cooccur/errors.hpp"
#include "cooccur/text.hpp"

namespace cooccur {

namespace {

bool is_joiner(char c) { return c == '\'' || c == '.'; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on file: " + path.string());
  }
  return std::move(buf).str();
}

void require_utf8(std::string_view text, const std::filesystem::path& path) {
  if (auto bad = find_invalid_utf8(text)) {
    throw IoError("invalid UTF-8 in " + path.string() + " at byte offset " +
                  std::to_string(*bad));
  }
}

}  // namespace

std::size_t scan_word_end(std::string_view text, std::size_t start) {
  std::size_t j = start;
  const std::size_t n = text.size();
  while (j < n) {
    unsigned char c = static_cast<unsigned char>(text[j]);
    if (is_word_byte(c)) {
      ++j;
    } else if (is_joiner(text[j]) && j + 1 < n &&
               is_word_byte(static_cast<unsigned char>(text[j + 1]))) {
      // j > start here: the first byte of a token is always a word byte,
      // so the joiner has word characters on both sides.
      ++j;
    } else {
      break;
    }
  }
  return j;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  std::uint32_t pos = 0;
  while (i < n) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t end = scan_word_end(text, i);
    tokens.push_back(Token{std::string(text.substr(i, end - i)), pos++});
    i = end;
  }
  return tokens;
}

std::uint64_t Corpus::token_count() const {
  std::uint64_t n = 0;
  for (const auto& d : docs_) n += d.tokens.size();
  return n;
}

Corpus Corpus::from_texts(
    const std::vector<std::pair<std::string, std::string>>& texts) {
  std::vector<Document> docs;
  docs.reserve(texts.size());
  for (const auto& [id, text] : texts) {
    docs.push_back(Document{id, tokenize(text)});
  }
  return Corpus(std::move(docs));
}

Corpus ingest_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a readable directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() && it->path().extension() == ".txt") {
      files.push_back(it->path());
    }
  }
  if (ec) {
    throw IoError("cannot list directory " + dir.string() + ": " +
                  ec.message());
  }

  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& file : files) {
    std::string text = read_file(file);
    require_utf8(text, file);
    std::string doc_id =
        std::filesystem::relative(file, dir).generic_string();
    docs.push_back(Document{std::move(doc_id), tokenize(text)});
  }
  std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
    return a.doc_id < b.doc_id;
  });
  return Corpus(std::move(docs));
}

Corpus ingest_lines(const std::filesystem::path& file) {
  std::string text = read_file(file);
  require_utf8(text, file);

  std::vector<Document> docs;
  std::size_t line_start = 0;
  std::size_t line_no = 1;
  while (line_start <= text.size()) {
    if (line_start == text.size()) {
      // Trailing newline produces no extra document.
      if (line_start == 0) break;  // empty file: zero documents
      if (text.back() == '\n') break;
    }
    std::size_t nl = text.find('\n', line_start);
    std::string_view line =
        nl == std::string::npos
            ? std::string_view(text).substr(line_start)
            : std::string_view(text).substr(line_start, nl - line_start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    docs.push_back(
        Document{"line-" + std::to_string(line_no), tokenize(line)});
    ++line_no;
    if (nl == std::string::npos) break;
    line_start = nl + 1;
  }
  return Corpus(std::move(docs));
}

StopWordList::StopWordList(std::vector<std::string> words) {
  for (auto& w : words) {
    if (!w.empty()) words_.insert(fold_case(w));
  }
  // Always present, whatever the source list says.
  for (const char* w : {"in", "the", "from", "their"}) words_.insert(w);
}

bool StopWordList::contains(std::string_view word) const {
  return words_.count(fold_case(word)) > 0;
}

const StopWordList& StopWordList::defaults() {
  // A small fixed list of English function words. Used only for context-word
  // selection, never at index time.
  static const StopWordList list(std::vector<std::string>{
      "a",     "about", "after", "all",   "an",    "and",   "any",
      "are",   "as",    "at",    "be",    "been",  "but",   "by",
      "can",   "did",   "do",    "does",  "for",   "from",  "had",
      "has",   "have",  "he",    "her",   "his",   "how",   "i",
      "if",    "in",    "into",  "is",    "it",    "its",   "may",
      "more",  "my",    "no",    "not",   "of",    "on",    "or",
      "our",   "she",   "so",    "some",  "than",  "that",  "the",
      "their", "them",  "then",  "there", "these", "they",  "this",
      "to",    "was",   "we",    "were",  "what",  "when",  "which",
      "who",   "will",  "with",  "would", "you",   "your"});
  return list;
}

StopWordList StopWordList::from_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  require_utf8(text, path);
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.push_back(line);
  }
  return StopWordList(std::move(words));
}

}  // namespace cooccur
