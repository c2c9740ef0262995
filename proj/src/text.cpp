#include "cooccur/text.hpp"

namespace cooccur {

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(ascii_fold(c));
  return out;
}

bool has_ascii_upper(std::string_view s) {
  for (char c : s) {
    if (is_ascii_upper(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

std::size_t scalar_count(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;  // count non-continuation bytes
  }
  return n;
}

std::size_t scalar_offset(std::string_view s, std::size_t scalar_index) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == scalar_index) return i;
      ++seen;
    }
  }
  return s.size();
}

std::size_t scalars_before(std::string_view s, std::size_t byte_offset) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size() && i < byte_offset; ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::optional<std::size_t> find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    unsigned cp_min;
    if (c < 0x80) {
      i += 1;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp_min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp_min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp_min = 0x10000;
    } else {
      return i;
    }
    if (i + len > n) return i;
    unsigned cp = c & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < cp_min) return i;                   // overlong encoding
    if (cp > 0x10FFFF) return i;                 // beyond Unicode range
    if (cp >= 0xD800 && cp <= 0xDFFF) return i;  // surrogate
    i += len;
  }
  return std::nullopt;
}

}  // namespace cooccur
