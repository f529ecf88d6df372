#include "rauzy/numeric.hpp"

#include <algorithm>
#include <cctype>

#include "rauzy/error.hpp"

namespace rauzy {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    std::size_t i = 0;
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    t.erase(0, i);
  };
  trim(s);
  if (s.empty()) throw DomainError("empty rational");
  const auto dot_pos = s.find('.');
  if (dot_pos != std::string::npos && s.find('/') == std::string::npos) {
    // finite decimal: sign, integer part, fraction part
    std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
    const std::size_t frac = s.size() - dot_pos - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw DomainError("malformed decimal '" + s + "'");
    if (digits.front() == '+') digits.erase(0, 1);
    BigInt num;
    if (num.set_str(digits, 10) != 0) throw DomainError("malformed decimal '" + s + "'");
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("malformed rational '" + std::string(text) + "'");
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

RatVec to_rational(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational sum(const RatVec& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

BigInt sum(const IntVec& v) {
  BigInt s = 0;
  for (const auto& x : v) s += x;
  return s;
}

RatVec normalize_sum(const RatVec& v) {
  const Rational s = sum(v);
  if (s == 0) throw DomainError("cannot normalize a vector with zero sum");
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / s;
  return out;
}

IntVec primitive_integer(const RatVec& v) {
  BigInt den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  IntVec out(v.size());
  BigInt g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].get_num() * (den / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  return out;
}

IntMatrix::IntMatrix(std::size_t n) : n_(n), a_(n * n) {}

IntMatrix::IntMatrix(std::size_t n, std::vector<BigInt> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) throw DomainError("IntMatrix: entry count is not n*n");
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntVec IntMatrix::apply(const IntVec& v) const {
  if (v.size() != n_) throw DomainError("IntMatrix::apply: dimension mismatch");
  IntVec out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    BigInt s = 0;
    for (std::size_t c = 0; c < n_; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

RatVec IntMatrix::apply(const RatVec& v) const {
  if (v.size() != n_) throw DomainError("IntMatrix::apply: dimension mismatch");
  RatVec out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < n_; ++c) s += Rational((*this)(r, c)) * v[c];
    out[r] = s;
  }
  return out;
}

void IntMatrix::add_column(std::size_t dst, std::size_t src) {
  for (std::size_t r = 0; r < n_; ++r) (*this)(r, dst) += (*this)(r, src);
}

void IntMatrix::add_row(std::size_t dst, std::size_t src) {
  for (std::size_t c = 0; c < n_; ++c) (*this)(dst, c) += (*this)(src, c);
}

BigInt IntMatrix::determinant() const {
  // Bareiss fraction-free elimination.
  if (n_ == 0) return 1;
  std::vector<BigInt> m = a_;
  auto at = [&](std::size_t r, std::size_t c) -> BigInt& { return m[r * n_ + c]; };
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n_ && at(p, k) == 0) ++p;
      if (p == n_) return 0;
      for (std::size_t c = 0; c < n_; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n_; ++i) {
      for (std::size_t j = k + 1; j < n_; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign * at(n_ - 1, n_ - 1);
}

RatVec IntMatrix::solve(const RatVec& b) const {
  RatMatrix m(n_, n_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a[i] = a_[i];
  return rauzy::solve(m, b);
}

bool IntMatrix::is_nonnegative() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return sgn(x) >= 0; });
}

bool IntMatrix::is_positive() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return sgn(x) > 0; });
}

std::size_t IntMatrix::max_bits() const {
  std::size_t bits = 0;
  for (const auto& x : a_) {
    if (x != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  }
  return bits;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.n_ != b.n_) throw DomainError("IntMatrix product: dimension mismatch");
  const std::size_t n = a.n_;
  IntMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows) {
  RatMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw DomainError("RatMatrix: ragged rows");
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t p = row;
    while (p < m.rows && m(p, col) == 0) ++p;
    if (p == m.rows) continue;
    if (p != row) {
      for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(p, c), m(row, c));
    }
    const Rational inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols; ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rational f = m(r, col);
      for (std::size_t c = col; c < m.cols; ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<RatVec> nullspace(const RatMatrix& m) {
  RatMatrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(m.cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(RatMatrix m) { return rref(m).size(); }

RatVec solve(const RatMatrix& m, const RatVec& b) {
  if (m.rows != m.cols || b.size() != m.rows) throw DomainError("solve: dimension mismatch");
  RatMatrix aug(m.rows, m.cols + 1);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) aug(r, c) = m(r, c);
    aug(r, m.cols) = b[r];
  }
  const auto pivots = rref(aug);
  if (pivots.size() != m.rows || (!pivots.empty() && pivots.back() >= m.cols)) {
    throw DomainError("solve: singular system");
  }
  RatVec x(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) x[r] = aug(r, m.cols);
  return x;
}

}  // namespace rauzy
