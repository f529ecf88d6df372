#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rauzy {

/// Thin value-semantics wrapper over an MPFR number.
///
/// Every value carries its own precision in bits. Binary operations round to
/// nearest at the larger precision of the two operands; the directed-rounding
/// helpers (`add_rounded`, `mul_rounded`, ...) are used where a computed
/// interval must be certified.
class BigReal {
 public:
  using Precision = mpfr_prec_t;

  static constexpr Precision kDefaultPrecision = 256;

  /// Per-thread default used by constructors that take no precision.
  static Precision default_precision() noexcept;
  static void set_default_precision(Precision bits);

  BigReal();
  explicit BigReal(double value, Precision bits = default_precision());
  template <std::integral I>
  explicit BigReal(I value, Precision bits = default_precision()) : BigReal(bits, Tag{}) {
    if constexpr (std::is_signed_v<I>) {
      mpfr_set_si(value_, static_cast<long>(value), MPFR_RNDN);
    } else {
      mpfr_set_ui(value_, static_cast<unsigned long>(value), MPFR_RNDN);
    }
  }
  explicit BigReal(const mpz_class& value, Precision bits = default_precision());
  explicit BigReal(const mpq_class& value, Precision bits = default_precision());

  /// Parses a decimal string ("0.25", "-1e-3") or an exact rational "p/q".
  static BigReal parse(std::string_view text, Precision bits = default_precision());
  static BigReal pow2(long exponent, Precision bits = default_precision());
  static BigReal pi(Precision bits = default_precision());

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  Precision precision() const noexcept { return mpfr_get_prec(value_); }
  /// Same value rounded to `bits`.
  BigReal with_precision(Precision bits) const;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }

  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Exact dyadic rational equal to this value.
  mpq_class to_rational() const;
  /// Decimal string; `digits == 0` selects enough digits to round-trip.
  std::string to_string(std::size_t digits = 0) const;
  /// Base-2 exponent e with 0.5 <= |x| / 2^e < 1 (0 for zero).
  long exponent() const noexcept;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) noexcept {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) noexcept;

  friend BigReal exp(const BigReal& x);
  /// e^x - 1 without cancellation near 0.
  friend BigReal expm1(const BigReal& x);
  friend BigReal log(const BigReal& x);
  friend BigReal sqrt(const BigReal& x);
  friend BigReal abs(const BigReal& x);
  friend BigReal floor(const BigReal& x);

  /// Directed-rounding arithmetic; result precision is max of the operands.
  static BigReal add_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd);
  static BigReal sub_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd);
  static BigReal mul_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd);

 private:
  struct Tag {};
  BigReal(Precision bits, Tag);
  mpfr_t value_;
};

std::ostream& operator<<(std::ostream& os, const BigReal& x);

/// Scoped change of the per-thread default precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(BigReal::Precision bits)
      : saved_(BigReal::default_precision()) {
    BigReal::set_default_precision(bits);
  }
  ~PrecisionGuard() { BigReal::set_default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  BigReal::Precision saved_;
};

}  // namespace rauzy
