// Byte-level text helpers shared by the tokenizer, the query lexer and the
// index: UTF-8 validation/scalar counting and the ASCII case rules.
//
// Case semantics are ASCII-only: a written term is case-sensitive iff it
// contains an ASCII uppercase letter; folding lowercases ASCII letters and
// leaves all other scalars untouched.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace cooccur {

inline bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

// Any non-ASCII byte belongs to a multi-byte scalar, which we treat as a
// word character.
inline bool is_word_byte(unsigned char c) {
  return is_ascii_alnum(c) || c >= 0x80;
}

inline char ascii_fold(char c) {
  return is_ascii_upper(static_cast<unsigned char>(c))
             ? static_cast<char>(c - 'A' + 'a')
             : c;
}

/// Lowercases ASCII letters; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

/// True if s contains an ASCII uppercase letter (case-sensitive form).
bool has_ascii_upper(std::string_view s);

/// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t scalar_count(std::string_view s);

/// Byte offset of the scalar with the given index (clamped to s.size()).
std::size_t scalar_offset(std::string_view s, std::size_t scalar_index);

/// Scalar index of the given byte offset (counts scalars in the prefix).
std::size_t scalars_before(std::string_view s, std::size_t byte_offset);

/// Returns the byte offset of the first invalid UTF-8 sequence, or nullopt
/// if the whole string is well-formed.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

}  // namespace cooccur
