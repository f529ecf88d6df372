#include "rauzy/iet.hpp"

#include <algorithm>

#include "rauzy/error.hpp"

namespace rauzy {

IET::IET(Perm perm, RatVec lambda) : perm_(std::move(perm)), lambda_(std::move(lambda)) {
  const std::size_t d = perm_.d();
  if (lambda_.size() != d) throw DomainError("length vector size differs from alphabet size");
  for (const auto& x : lambda_) {
    if (sgn(x) <= 0) throw DomainError("interval lengths must be positive");
  }
  if (sum(lambda_) != 1) lambda_ = normalize_sum(lambda_);
  left_.assign(d, Rational(0));
  image_left_.assign(d, Rational(0));
  Rational acc = 0;
  for (Letter a : perm_.top()) {
    left_[a] = acc;
    acc += lambda_[a];
  }
  acc = 0;
  for (Letter a : perm_.bottom()) {
    image_left_[a] = acc;
    acc += lambda_[a];
  }
  translation_.resize(d);
  for (Letter a = 0; a < d; ++a) translation_[a] = image_left_[a] - left_[a];
}

Interval IET::domain(Letter a) const { return {left_.at(a), left_.at(a) + lambda_.at(a)}; }

Interval IET::image(Letter a) const { return {image_left_.at(a), image_left_.at(a) + lambda_.at(a)}; }

Letter IET::letter_at(const Rational& x) const {
  if (sgn(x) < 0 || x >= 1) throw DomainError("point outside [0,1)");
  const auto& top = perm_.top();
  // last top position whose left endpoint is <= x
  std::size_t lo = 0, hi = top.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (left_[top[mid]] <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return top[lo];
}

IET build_iet(const RatVec& lambda, const Perm& perm) { return IET(perm, lambda); }

RatVec translation_vector(const IET& t) {
  const Perm& p = t.perm();
  const auto& lam = t.lambda();
  RatVec w(t.d(), Rational(0));
  for (Letter a = 0; a < t.d(); ++a) {
    for (Letter b = 0; b < t.d(); ++b) {
      if (p.pos_bottom(b) < p.pos_bottom(a)) w[a] += lam[b];
      if (p.pos_top(b) < p.pos_top(a)) w[a] -= lam[b];
    }
  }
  return w;
}

RatVec translation_vector_omega(const IET& t) { return omega_matrix(t.perm()).apply(t.lambda()); }

Rational evaluate(const IET& t, const Rational& x) {
  const Letter a = t.letter_at(x);
  return x + t.translation()[a];
}

Rational evaluate_inverse(const IET& t, const Rational& y) {
  if (sgn(y) < 0 || y >= 1) throw DomainError("point outside [0,1)");
  for (Letter a : t.perm().bottom()) {
    if (t.image(a).contains(y)) return y - t.translation()[a];
  }
  throw DomainError("point not covered by the image tiling");
}

std::optional<KeaneWitness> keane_check(const IET& t, std::size_t depth) {
  const Perm& p = t.perm();
  std::vector<std::pair<Rational, Letter>> disc;
  for (Letter a = 0; a < t.d(); ++a) {
    if (p.pos_top(a) != 0) disc.emplace_back(t.domain(a).left, a);
  }
  std::sort(disc.begin(), disc.end());
  for (const auto& [start, from] : disc) {
    Rational x = start;
    for (std::size_t k = 1; k <= depth; ++k) {
      x = evaluate(t, x);
      auto it = std::lower_bound(disc.begin(), disc.end(), x,
                                 [](const auto& e, const Rational& v) { return e.first < v; });
      if (it != disc.end() && it->first == x) return KeaneWitness{from, k, it->second};
    }
  }
  return std::nullopt;
}

std::vector<ReturnBranch> first_return_map(const IET& t, const Interval& j, std::uint64_t max_time) {
  if (sgn(j.left) < 0 || j.right > 1 || j.left >= j.right) throw DomainError("bad inducing interval");
  // Work with integer numerators over a common denominator.
  BigInt den = 1;
  auto lcm_in = [&](const Rational& q) { mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t()); };
  for (const auto& x : t.lambda()) lcm_in(x);
  lcm_in(j.left);
  lcm_in(j.right);
  auto scale = [&](const Rational& q) -> BigInt { return q.get_num() * (den / q.get_den()); };

  const std::size_t d = t.d();
  std::vector<BigInt> cut;  // left endpoints in top order, then the right end
  std::vector<BigInt> shift;
  for (Letter a : t.perm().top()) {
    cut.push_back(scale(t.domain(a).left));
    shift.push_back(scale(t.translation()[a]));
  }
  cut.push_back(den);
  const BigInt jl = scale(j.left), jr = scale(j.right);

  struct Piece {
    BigInt lo, hi;   // current position [lo, hi)
    BigInt offset;   // position - original domain
    std::uint64_t time;
  };
  struct Raw {
    BigInt lo, hi, offset;
    std::uint64_t time;
  };
  std::vector<Raw> done;
  std::vector<Piece> active{{jl, jr, 0, 0}};
  while (!active.empty()) {
    std::vector<Piece> next;
    for (auto& pc : active) {
      if (pc.time >= max_time) {
        throw ResourceGuard("first return map: some point has not returned after " +
                            std::to_string(max_time) + " steps");
      }
      // split by continuity intervals and push forward
      for (std::size_t i = 0; i < d; ++i) {
        const BigInt lo = std::max(pc.lo, cut[i]);
        const BigInt hi = std::min(pc.hi, cut[i + 1]);
        if (lo >= hi) continue;
        const BigInt ilo = lo + shift[i], ihi = hi + shift[i];
        const BigInt off = pc.offset + shift[i];
        // inside J returns, outside continues
        const BigInt rlo = std::max(ilo, jl), rhi = std::min(ihi, jr);
        if (rlo < rhi) done.push_back({rlo - off, rhi - off, off, pc.time + 1});
        if (ilo < jl) next.push_back({ilo, std::min(ihi, jl), off, pc.time + 1});
        if (ihi > jr) next.push_back({std::max(ilo, jr), ihi, off, pc.time + 1});
      }
    }
    active = std::move(next);
  }
  std::sort(done.begin(), done.end(), [](const Raw& a, const Raw& b) { return a.lo < b.lo; });
  std::vector<ReturnBranch> out;
  for (const auto& r : done) {
    if (!out.empty() && out.back().time == r.time && scale(out.back().translation) == r.offset &&
        scale(out.back().domain.right) == r.lo) {
      out.back().domain.right = Rational(r.hi, den);
      out.back().domain.right.canonicalize();
      continue;
    }
    ReturnBranch b{{Rational(r.lo, den), Rational(r.hi, den)}, r.time, Rational(r.offset, den)};
    b.domain.left.canonicalize();
    b.domain.right.canonicalize();
    b.translation.canonicalize();
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace rauzy
