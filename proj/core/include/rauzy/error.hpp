#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rauzy {

/// Invalid input: malformed permutation, nonpositive length, wrong dimension.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rauzy-Veech induction is undefined: the two competing intervals have
/// equal length. `step` is the number of induction steps performed before
/// the tie was met.
class NotRenormalizable : public std::runtime_error {
 public:
  NotRenormalizable(const std::string& what, std::int64_t step)
      : std::runtime_error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// A tie that cannot be decided at the working precision.
class TieUndecidable : public NotRenormalizable {
 public:
  using NotRenormalizable::NotRenormalizable;
};

/// A configurable resource cap (matrix entry size, iteration count, class
/// size) was exceeded.
class ResourceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// High-precision computation ran out of trusted bits.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rauzy
