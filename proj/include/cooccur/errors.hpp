#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cooccur {

// All library failures derive from Error so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Query syntax error. offset is in Unicode scalar values, byte_offset in
/// bytes, both counted from the start of the query text.
struct ParseError : Error {
  ParseError(const std::string& message, std::size_t scalar_off,
             std::size_t byte_off)
      : Error(message), offset(scalar_off), byte_offset(byte_off) {}
  std::size_t offset;
  std::size_t byte_offset;
};

/// File-level failure (ingestion, index load/save, task/question files).
struct IoError : Error {
  using Error::Error;
};

}  // namespace cooccur
