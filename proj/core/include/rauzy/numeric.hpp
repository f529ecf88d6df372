#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace rauzy {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntVec = std::vector<BigInt>;
using RatVec = std::vector<Rational>;

/// Parses "p/q", "p" or a finite decimal such as "0.125" into a reduced rational.
Rational parse_rational(std::string_view text);
/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& q);

RatVec to_rational(const IntVec& v);
Rational dot(const RatVec& a, const RatVec& b);
Rational sum(const RatVec& v);
BigInt sum(const IntVec& v);
/// v / sum(v). Throws DomainError if the sum is zero.
RatVec normalize_sum(const RatVec& v);
/// Scales a rational vector to coprime integers, keeping the direction
/// (sign included). The zero vector maps to zeros.
IntVec primitive_integer(const RatVec& v);

/// Dense square matrix of big integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n);
  IntMatrix(std::size_t n, std::vector<BigInt> entries);

  static IntMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  IntMatrix transpose() const;
  IntVec apply(const IntVec& v) const;
  RatVec apply(const RatVec& v) const;

  /// column `dst` += column `src`; this is right multiplication by I + E_{src,dst}.
  void add_column(std::size_t dst, std::size_t src);
  /// row `dst` += row `src`; left multiplication by I + E_{dst,src}.
  void add_row(std::size_t dst, std::size_t src);

  BigInt determinant() const;
  /// Exact solution x of M x = b; throws DomainError if M is singular.
  RatVec solve(const RatVec& b) const;

  bool is_nonnegative() const;
  bool is_positive() const;
  /// Bit length of the largest |entry|.
  std::size_t max_bits() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  const std::vector<BigInt>& entries() const noexcept { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<BigInt> a_;
};

/// Dense rational matrix, row-major, used for small exact linear algebra.
struct RatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> a;

  RatMatrix() = default;
  RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  Rational& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  static RatMatrix from_rows(const std::vector<RatVec>& rows);
};

/// Reduced row-echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);
/// Basis of {x : M x = 0}, one vector per free column (standard RREF basis).
std::vector<RatVec> nullspace(const RatMatrix& m);
/// Rank over the rationals.
std::size_t rank(RatMatrix m);
/// Solves a square nonsingular rational system.
RatVec solve(const RatMatrix& m, const RatVec& b);

}  // namespace rauzy
