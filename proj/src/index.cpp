#include "cooccur/index.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "cooccur/errors.hpp"
#include "cooccur/text.hpp"

namespace cooccur {

namespace {

// --- evaluation -------------------------------------------------------------

struct Span {
  std::uint32_t first;
  std::uint32_t last;
};

// Token-position distance between two spans: 0 when they overlap, otherwise
// the gap between the nearest endpoints.
std::uint32_t span_distance(const Span& a, const Span& b) {
  if (a.first <= b.last && b.first <= a.last) return 0;
  return a.last < b.first ? b.first - a.last : a.first - b.last;
}

// The posting lists an atom (Term or Wildcard) expands to.
struct ResolvedAtom {
  std::vector<const PostingList*> lists;
};

class Evaluator {
 public:
  explicit Evaluator(const std::vector<TermEntry>& terms) : terms_(terms) {}

  std::vector<std::uint32_t> eval_docs(const QueryNode& node) const {
    return std::visit(
        [&](const auto& n) -> std::vector<std::uint32_t> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Term>) {
            return docs_of(resolve_term(n));
          } else if constexpr (std::is_same_v<T, Wildcard>) {
            return docs_of(resolve_wildcard(n));
          } else if constexpr (std::is_same_v<T, Phrase>) {
            return phrase_docs(n);
          } else if constexpr (std::is_same_v<T, Or>) {
            return set_union(eval_docs(*n.left), eval_docs(*n.right));
          } else if constexpr (std::is_same_v<T, And>) {
            return set_intersection(eval_docs(*n.left), eval_docs(*n.right));
          } else if constexpr (std::is_same_v<T, AndNot>) {
            return set_difference(eval_docs(*n.left), eval_docs(*n.right));
          } else {
            return near_docs(n);
          }
        },
        node.value);
  }

 private:
  const TermEntry* find_entry(std::string_view folded) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), folded,
        [](const TermEntry& e, std::string_view f) { return e.folded < f; });
    if (it == terms_.end() || it->folded != folded) return nullptr;
    return &*it;
  }

  ResolvedAtom resolve_term(const Term& t) const {
    ResolvedAtom r;
    const TermEntry* e = find_entry(fold_case(t.surface));
    if (!e) return r;
    if (case_mode_of(t.surface) == CaseMode::insensitive) {
      r.lists.push_back(&e->merged);
      return r;
    }
    auto it = std::lower_bound(
        e->surfaces.begin(), e->surfaces.end(), t.surface,
        [](const SurfaceEntry& s, const std::string& v) {
          return s.surface < v;
        });
    if (it != e->surfaces.end() && it->surface == t.surface) {
      r.lists.push_back(&it->postings);
    }
    return r;
  }

  ResolvedAtom resolve_wildcard(const Wildcard& w) const {
    ResolvedAtom r;
    const std::string folded_prefix = fold_case(w.prefix);
    const std::size_t prefix_scalars = scalar_count(w.prefix);
    const bool sensitive = case_mode_of(w.prefix) == CaseMode::sensitive;

    auto it = std::lower_bound(terms_.begin(), terms_.end(), folded_prefix,
                               [](const TermEntry& e, const std::string& f) {
                                 return e.folded < f;
                               });
    for (; it != terms_.end(); ++it) {
      std::string_view folded = it->folded;
      if (folded.compare(0, folded_prefix.size(), folded_prefix) != 0) break;
      // Folding preserves scalar counts, so the suffix-length test can run
      // on the folded form.
      if (scalar_count(folded) - prefix_scalars > kMaxWildcardSuffix) continue;
      if (!sensitive) {
        r.lists.push_back(&it->merged);
        continue;
      }
      for (const SurfaceEntry& s : it->surfaces) {
        if (s.surface.compare(0, w.prefix.size(), w.prefix) == 0) {
          r.lists.push_back(&s.postings);
        }
      }
    }
    return r;
  }

  std::vector<std::uint32_t> docs_of(const ResolvedAtom& atom) const {
    std::vector<std::uint32_t> docs;
    for (const PostingList* pl : atom.lists) {
      for (const Posting& p : *pl) docs.push_back(p.doc);
    }
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return docs;
  }

  std::vector<std::uint32_t> positions_in(const ResolvedAtom& atom,
                                          std::uint32_t doc) const {
    std::vector<std::uint32_t> positions;
    for (const PostingList* pl : atom.lists) {
      auto it = std::lower_bound(pl->begin(), pl->end(), doc,
                                 [](const Posting& p, std::uint32_t d) {
                                   return p.doc < d;
                                 });
      if (it != pl->end() && it->doc == doc) {
        positions.insert(positions.end(), it->positions.begin(),
                         it->positions.end());
      }
    }
    std::sort(positions.begin(), positions.end());
    return positions;
  }

  std::vector<std::uint32_t> phrase_docs(const Phrase& phrase) const {
    std::vector<ResolvedAtom> atoms;
    atoms.reserve(phrase.terms.size());
    for (const Term& t : phrase.terms) atoms.push_back(resolve_term(t));

    std::vector<std::uint32_t> candidates = docs_of(atoms[0]);
    for (std::size_t i = 1; i < atoms.size() && !candidates.empty(); ++i) {
      candidates = set_intersection(candidates, docs_of(atoms[i]));
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t d : candidates) {
      if (!phrase_spans(atoms, d).empty()) out.push_back(d);
    }
    return out;
  }

  std::vector<Span> phrase_spans(const std::vector<ResolvedAtom>& atoms,
                                 std::uint32_t doc) const {
    std::vector<std::vector<std::uint32_t>> pos;
    pos.reserve(atoms.size());
    for (const auto& a : atoms) pos.push_back(positions_in(a, doc));

    std::vector<Span> spans;
    const std::uint32_t len = static_cast<std::uint32_t>(atoms.size());
    for (std::uint32_t start : pos[0]) {
      bool ok = true;
      for (std::uint32_t i = 1; i < len; ++i) {
        if (!std::binary_search(pos[i].begin(), pos[i].end(), start + i)) {
          ok = false;
          break;
        }
      }
      if (ok) spans.push_back(Span{start, start + len - 1});
    }
    return spans;
  }

  // Occurrence spans of an atomic-or-disjunctive node within one document.
  std::vector<Span> occurrences(const QueryNode& node,
                                std::uint32_t doc) const {
    return std::visit(
        [&](const auto& n) -> std::vector<Span> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Term>) {
            std::vector<Span> spans;
            for (std::uint32_t p : positions_in(resolve_term(n), doc)) {
              spans.push_back(Span{p, p});
            }
            return spans;
          } else if constexpr (std::is_same_v<T, Wildcard>) {
            std::vector<Span> spans;
            for (std::uint32_t p : positions_in(resolve_wildcard(n), doc)) {
              spans.push_back(Span{p, p});
            }
            return spans;
          } else if constexpr (std::is_same_v<T, Phrase>) {
            std::vector<ResolvedAtom> atoms;
            atoms.reserve(n.terms.size());
            for (const Term& t : n.terms) atoms.push_back(resolve_term(t));
            return phrase_spans(atoms, doc);
          } else if constexpr (std::is_same_v<T, Or>) {
            std::vector<Span> spans = occurrences(*n.left, doc);
            std::vector<Span> rhs = occurrences(*n.right, doc);
            spans.insert(spans.end(), rhs.begin(), rhs.end());
            return spans;
          } else {
            return {};  // unreachable: operands are validated
          }
        },
        node.value);
  }

  std::vector<std::uint32_t> near_docs(const Near& near) const {
    std::vector<std::uint32_t> candidates =
        set_intersection(eval_docs(*near.left), eval_docs(*near.right));
    const std::uint32_t window = static_cast<std::uint32_t>(near.window);
    std::vector<std::uint32_t> out;
    for (std::uint32_t d : candidates) {
      std::vector<Span> a = occurrences(*near.left, d);
      std::vector<Span> b = occurrences(*near.right, d);
      bool found = false;
      for (const Span& sa : a) {
        for (const Span& sb : b) {
          if (span_distance(sa, sb) <= window) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) out.push_back(d);
    }
    return out;
  }

  static std::vector<std::uint32_t> set_union(
      const std::vector<std::uint32_t>& a,
      const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
    return out;
  }

  static std::vector<std::uint32_t> set_intersection(
      const std::vector<std::uint32_t>& a,
      const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
  }

  static std::vector<std::uint32_t> set_difference(
      const std::vector<std::uint32_t>& a,
      const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return out;
  }

  const std::vector<TermEntry>& terms_;
};

void require_valid(const QueryNode& node) {
  std::vector<std::string> errors = validate(node);
  if (!errors.empty()) {
    std::string msg = "invalid query: " + errors.front();
    for (std::size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
    throw Error(msg);
  }
}

// --- serialization ----------------------------------------------------------

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class PayloadReader {
 public:
  explicit PayloadReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::string str() {
    std::uint32_t len = u32();
    need(len);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw IoError("truncated index file");
    }
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

PostingList merge_surfaces(const std::vector<SurfaceEntry>& surfaces) {
  if (surfaces.size() == 1) return surfaces.front().postings;
  std::map<std::uint32_t, std::vector<std::uint32_t>> by_doc;
  for (const SurfaceEntry& s : surfaces) {
    for (const Posting& p : s.postings) {
      auto& v = by_doc[p.doc];
      v.insert(v.end(), p.positions.begin(), p.positions.end());
    }
  }
  PostingList merged;
  merged.reserve(by_doc.size());
  for (auto& [doc, positions] : by_doc) {
    std::sort(positions.begin(), positions.end());
    merged.push_back(Posting{doc, std::move(positions)});
  }
  return merged;
}

}  // namespace

PositionalIndex PositionalIndex::build(const Corpus& corpus) {
  // folded term -> surface -> postings; std::map keeps the result ordered,
  // which makes the serialized index byte-identical for a given corpus.
  std::map<std::string, std::map<std::string, PostingList>> acc;

  const auto& docs = corpus.documents();
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    for (const Token& t : docs[d].tokens) {
      PostingList& pl = acc[fold_case(t.surface)][t.surface];
      if (pl.empty() || pl.back().doc != d) pl.push_back(Posting{d, {}});
      pl.back().positions.push_back(t.position);
    }
  }

  PositionalIndex index;
  index.doc_ids_.reserve(docs.size());
  for (const Document& doc : docs) index.doc_ids_.push_back(doc.doc_id);
  index.total_tokens_ = corpus.token_count();

  index.terms_.reserve(acc.size());
  for (auto& [folded, surfaces] : acc) {
    TermEntry entry;
    entry.folded = folded;
    entry.surfaces.reserve(surfaces.size());
    for (auto& [surface, postings] : surfaces) {
      entry.surfaces.push_back(SurfaceEntry{surface, std::move(postings)});
    }
    entry.merged = merge_surfaces(entry.surfaces);
    index.terms_.push_back(std::move(entry));
  }
  return index;
}

std::uint64_t PositionalIndex::hits(const QueryNode& node) const {
  require_valid(node);
  return Evaluator(terms_).eval_docs(node).size();
}

std::vector<std::uint32_t> PositionalIndex::matching_docs(
    const QueryNode& node) const {
  require_valid(node);
  return Evaluator(terms_).eval_docs(node);
}

void PositionalIndex::save(std::ostream& out) const {
  std::string payload;
  for (const std::string& id : doc_ids_) put_str(payload, id);
  for (const TermEntry& e : terms_) {
    put_str(payload, e.folded);
    put_u32(payload, static_cast<std::uint32_t>(e.surfaces.size()));
    for (const SurfaceEntry& s : e.surfaces) {
      put_str(payload, s.surface);
      put_u32(payload, static_cast<std::uint32_t>(s.postings.size()));
      for (const Posting& p : s.postings) {
        put_u32(payload, p.doc);
        put_u32(payload, static_cast<std::uint32_t>(p.positions.size()));
        for (std::uint32_t pos : p.positions) put_u32(payload, pos);
      }
    }
  }

  std::string header;
  header.append(kIndexMagic, 4);
  put_u32(header, kIndexFormatVersion);
  put_u64(header, doc_ids_.size());
  put_u64(header, total_tokens_);
  put_u64(header, terms_.size());
  put_u64(header, payload.size());
  put_u64(header, fnv1a64(payload));

  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("failed to write index");
}

void PositionalIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write index file: " + path.string());
  save(out);
  out.flush();
  if (!out) throw IoError("failed to write index file: " + path.string());
}

PositionalIndex PositionalIndex::load(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8 + 8 + 8 + 8;
  if (data.size() < kHeaderSize ||
      data.compare(0, 4, kIndexMagic, 4) != 0) {
    throw IoError("bad magic: not an index file");
  }
  PayloadReader header(std::string_view(data).substr(4, kHeaderSize - 4));
  std::uint32_t version = header.u32();
  if (version != kIndexFormatVersion) {
    throw IoError("unsupported index version " + std::to_string(version) +
                  " (this build reads version " +
                  std::to_string(kIndexFormatVersion) + ")");
  }
  auto u64_at = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data[off + i]))
           << (8 * i);
    }
    return v;
  };
  std::uint64_t doc_count = u64_at(8);
  std::uint64_t total_tokens = u64_at(16);
  std::uint64_t term_count = u64_at(24);
  std::uint64_t payload_size = u64_at(32);
  std::uint64_t checksum = u64_at(40);

  std::string_view payload = std::string_view(data).substr(kHeaderSize);
  if (payload.size() != payload_size) {
    throw IoError("truncated index file: payload is " +
                  std::to_string(payload.size()) + " bytes, header says " +
                  std::to_string(payload_size));
  }
  if (fnv1a64(payload) != checksum) {
    throw IoError("index checksum mismatch");
  }

  PositionalIndex index;
  index.total_tokens_ = total_tokens;
  PayloadReader r(payload);
  index.doc_ids_.reserve(doc_count);
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    index.doc_ids_.push_back(r.str());
  }
  index.terms_.reserve(term_count);
  for (std::uint64_t i = 0; i < term_count; ++i) {
    TermEntry entry;
    entry.folded = r.str();
    std::uint32_t surface_count = r.u32();
    entry.surfaces.reserve(surface_count);
    for (std::uint32_t s = 0; s < surface_count; ++s) {
      SurfaceEntry se;
      se.surface = r.str();
      std::uint32_t posting_count = r.u32();
      se.postings.reserve(posting_count);
      for (std::uint32_t p = 0; p < posting_count; ++p) {
        Posting posting;
        posting.doc = r.u32();
        std::uint32_t npos = r.u32();
        posting.positions.reserve(npos);
        for (std::uint32_t k = 0; k < npos; ++k) {
          posting.positions.push_back(r.u32());
        }
        se.postings.push_back(std::move(posting));
      }
      entry.surfaces.push_back(std::move(se));
    }
    entry.merged = merge_surfaces(entry.surfaces);
    index.terms_.push_back(std::move(entry));
  }
  if (!r.exhausted()) {
    throw IoError("index file has trailing bytes");
  }
  return index;
}

PositionalIndex PositionalIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read index file: " + path.string());
  return load(in);
}

}  // namespace cooccur
