#include "rauzy/bigreal.hpp"

#include <algorithm>
#include <memory>
#include <ostream>

#include "rauzy/error.hpp"

namespace rauzy {
namespace {

thread_local BigReal::Precision tls_default_precision = BigReal::kDefaultPrecision;

BigReal::Precision max_prec(const BigReal& a, const BigReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

BigReal::Precision BigReal::default_precision() noexcept { return tls_default_precision; }

void BigReal::set_default_precision(Precision bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw DomainError("precision out of MPFR range");
  }
  tls_default_precision = bits;
}

BigReal::BigReal(Precision bits, Tag) { mpfr_init2(value_, bits); }

BigReal::BigReal() : BigReal(default_precision(), Tag{}) { mpfr_set_zero(value_, 1); }

BigReal::BigReal(double value, Precision bits) : BigReal(bits, Tag{}) {
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const mpz_class& value, Precision bits) : BigReal(bits, Tag{}) {
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const mpq_class& value, Precision bits) : BigReal(bits, Tag{}) {
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::parse(std::string_view text, Precision bits) {
  std::string s(text);
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
      throw DomainError("malformed rational '" + s + "'");
    }
    q.canonicalize();
    return BigReal(q, bits);
  }
  BigReal r(bits, Tag{});
  char* end = nullptr;
  if (mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN), end == s.c_str() || *end != '\0') {
    throw DomainError("malformed decimal '" + s + "'");
  }
  return r;
}

BigReal BigReal::pow2(long exponent, Precision bits) {
  BigReal r(bits, Tag{});
  mpfr_set_ui_2exp(r.value_, 1, exponent, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi(Precision bits) {
  BigReal r(bits, Tag{});
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

BigReal::BigReal(const BigReal& other) : BigReal(other.precision(), Tag{}) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept : BigReal(MPFR_PREC_MIN, Tag{}) {
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::with_precision(Precision bits) const {
  BigReal r(bits, Tag{});
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

mpq_class BigReal::to_rational() const {
  if (!is_finite()) throw DomainError("non-finite value has no rational form");
  mpq_class q;
  mpz_class m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), value_);
  q = m;
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  q.canonicalize();
  return q;
}

std::string BigReal::to_string(std::size_t digits) const {
  if (is_zero()) return "0";
  if (!is_finite()) return mpfr_nan_p(value_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  mpfr_exp_t exp10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &exp10, 10, digits, value_, MPFR_RNDN), mpfr_free_str);
  std::string mant(raw.get());
  std::string sign;
  if (!mant.empty() && mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  // value = 0.mant * 10^exp10
  std::string out = sign + "0." + mant;
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

long BigReal::exponent() const noexcept {
  if (is_zero() || !is_finite()) return 0;
  return static_cast<long>(mpfr_get_exp(value_));
}

BigReal& BigReal::operator+=(const BigReal& rhs) { return *this = *this + rhs; }
BigReal& BigReal::operator-=(const BigReal& rhs) { return *this = *this - rhs; }
BigReal& BigReal::operator*=(const BigReal& rhs) { return *this = *this * rhs; }
BigReal& BigReal::operator/=(const BigReal& rhs) { return *this = *this / rhs; }

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b), BigReal::Tag{});
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b), BigReal::Tag{});
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b), BigReal::Tag{});
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b), BigReal::Tag{});
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision(), BigReal::Tag{});
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) noexcept {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_exp(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigReal expm1(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_expm1(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_log(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_sqrt(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigReal abs(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_abs(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigReal floor(const BigReal& x) {
  BigReal r(x.precision(), BigReal::Tag{});
  mpfr_floor(r.value_, x.value_);
  return r;
}

BigReal BigReal::add_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd) {
  BigReal r(max_prec(a, b), Tag{});
  mpfr_add(r.value_, a.value_, b.value_, rnd);
  return r;
}

BigReal BigReal::sub_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd) {
  BigReal r(max_prec(a, b), Tag{});
  mpfr_sub(r.value_, a.value_, b.value_, rnd);
  return r;
}

BigReal BigReal::mul_rounded(const BigReal& a, const BigReal& b, mpfr_rnd_t rnd) {
  BigReal r(max_prec(a, b), Tag{});
  mpfr_mul(r.value_, a.value_, b.value_, rnd);
  return r;
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }

}  // namespace rauzy
