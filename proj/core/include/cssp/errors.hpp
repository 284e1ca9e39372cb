#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cssp {

// Base class for all domain errors. The CLI maps these to exit code 2,
// while I/O and parse failures map to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroMatrixError : Error {
  using Error::Error;
};

struct NotOrthonormalError : Error {
  using Error::Error;
};

struct InfeasibleThresholdError : Error {
  using Error::Error;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

struct RankDeficientError : Error {
  using Error::Error;
};

struct InfeasibleTargetsError : Error {
  using Error::Error;
};

struct EmptyComplementError : Error {
  using Error::Error;
};

struct InvalidRankError : Error {
  using Error::Error;
};

struct InvalidEpsilonError : Error {
  using Error::Error;
};

struct InvalidArgumentError : Error {
  using Error::Error;
};

// File ingestion failures; `line` is 1-based, 0 when not line-specific.
struct ParseError : std::runtime_error {
  std::size_t line;
  ParseError(const std::string& what, std::size_t line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line(0) {}
};

struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace cssp
