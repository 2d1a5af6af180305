#pragma once

#include <stdexcept>
#include <string>

namespace spheremean {

/// Argument outside the mathematical domain of a function (e.g. Bessel order nu <= -1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two routes that must agree did not. Always signals a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid grid, dimension mismatch, unsupported shape and similar setup problems.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by kernel_check when no lattice frequency lies close to the requested zero.
class GridTooCoarseError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

/// Range characterization requested for an order it is not established for.
class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Zero search could not certify a sign change where one was predicted.
class SearchError : public std::runtime_error {
 public:
  SearchError(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo_(lo),
        hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Field container I/O failure; offset is the byte position where reading failed.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedDimensionError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace spheremean
