#include "rauzy/circle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>

#include "rauzy/error.hpp"

namespace rauzy {

namespace {

BigReal at_bits(const BigReal& x, BigReal::Precision bits) {
  return x.precision() == bits ? x : x.with_precision(bits);
}

BigReal tol_bits(BigReal::Precision bits, long slack) {
  return BigReal::pow2(-(static_cast<long>(bits) - slack), bits);
}

BigInt floor_int(const BigReal& x) {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDD);
  return z;
}

BigReal recip(const BigReal& x, mpfr_rnd_t rnd) {
  BigReal r(0, x.precision());
  mpfr_ui_div(r.get(), 1, x.get(), rnd);
  return r;
}

/// Builds a map from sorted cut points (0 first); slopes come from a
/// callback on piece midpoints. Cuts closer than the tolerance collapse and
/// pieces with matching slopes merge, except at 0.
PLCircleMap from_cuts(RealVec cuts, const std::function<BigReal(const BigReal&)>& slope_at, BigReal shift,
                      BigReal::Precision bits) {
  const BigReal tol = tol_bits(bits, 16);
  for (auto& c : cuts) c = frac(at_bits(c, bits));
  std::sort(cuts.begin(), cuts.end());
  RealVec uniq;
  for (const auto& c : cuts) {
    if (uniq.empty() || c - uniq.back() > tol) uniq.push_back(c);
  }
  if (uniq.empty() || uniq.front() > tol) uniq.insert(uniq.begin(), BigReal(0, bits));
  uniq.front() = BigReal(0, bits);
  const BigReal one(1, bits);
  if (uniq.size() > 1 && one - uniq.back() <= tol) uniq.pop_back();
  RealVec br, sl;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const BigReal right = i + 1 < uniq.size() ? uniq[i + 1] : one;
    const BigReal s = slope_at((uniq[i] + right) / BigReal(2, bits));
    if (i > 0 && abs(s - sl.back()) <= tol) continue;
    br.push_back(uniq[i]);
    sl.push_back(s);
  }
  // recompute the total from the merged pieces and spread the rounding on it
  BigReal total(0, bits);
  for (std::size_t i = 0; i < br.size(); ++i) {
    const BigReal right = i + 1 < br.size() ? br[i + 1] : one;
    total += sl[i] * (right - br[i]);
  }
  for (auto& s : sl) s /= total;
  return PLCircleMap(std::move(br), std::move(sl), frac(shift), bits);
}

}  // namespace

BigReal frac(const BigReal& x) {
  BigReal r = x - floor(x);
  if (r >= BigReal(1, x.precision())) r = BigReal(0, x.precision());
  return r;
}

PLCircleMap::PLCircleMap(RealVec breaks, RealVec slopes, BigReal shift, BigReal::Precision bits)
    : breaks_(std::move(breaks)), slopes_(std::move(slopes)), bits_(bits) {
  if (breaks_.empty() || breaks_.size() != slopes_.size()) {
    throw DomainError("PL map needs one slope per break point");
  }
  for (auto& b : breaks_) b = at_bits(b, bits_);
  for (auto& s : slopes_) s = at_bits(s, bits_);
  if (!breaks_.front().is_zero()) throw DomainError("PL map break points must contain 0");
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i - 1] < breaks_[i])) throw DomainError("PL map break points must increase strictly");
  }
  if (!(breaks_.back() < BigReal(1, bits_))) throw DomainError("PL map break points must lie in [0,1)");
  for (const auto& s : slopes_) {
    if (!(s.sign() > 0) || !s.is_finite()) throw DomainError("PL map slopes must be positive");
  }
  shift_ = frac(at_bits(shift, bits_));
  layout();
  if (abs(cum_.back() - BigReal(1, bits_)) > tol_bits(bits_, 8)) {
    throw DomainError("PL map image length is " + cum_.back().to_string(20) + ", not 1");
  }
}

void PLCircleMap::layout() {
  cum_.assign(1, BigReal(0, bits_));
  const BigReal one(1, bits_);
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const BigReal right = i + 1 < breaks_.size() ? breaks_[i + 1] : one;
    cum_.push_back(cum_.back() + slopes_[i] * (right - breaks_[i]));
  }
}

PLCircleMap PLCircleMap::rotation(const BigReal& alpha, BigReal::Precision bits) {
  return PLCircleMap({BigReal(0, bits)}, {BigReal(1, bits)}, alpha, bits);
}

std::size_t PLCircleMap::piece_at(const BigReal& x) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

BigReal PLCircleMap::lift(const BigReal& x) const {
  const BigReal n = floor(x);
  const BigReal y = x - n;
  const std::size_t i = piece_at(y);
  return n + shift_ + cum_[i] + slopes_[i] * (y - breaks_[i]);
}

BigReal PLCircleMap::operator()(const BigReal& x) const { return frac(lift(x)); }

BigReal PLCircleMap::preimage(const BigReal& y) const {
  BigReal target = frac(at_bits(y, bits_)) - shift_;
  if (target.sign() < 0) target += BigReal(1, bits_);
  // cum_ is increasing: last piece whose image starts at or below target
  auto it = std::upper_bound(cum_.begin(), cum_.end() - 1, target);
  const std::size_t i = it == cum_.begin() ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
  const std::size_t k = std::min(i, breaks_.size() - 1);
  return frac(breaks_[k] + (target - cum_[k]) / slopes_[k]);
}

PLCircleMap compose(const PLCircleMap& f, const PLCircleMap& g) {
  const BigReal::Precision bits = std::max(f.precision(), g.precision());
  RealVec cuts = g.breaks();
  for (const auto& b : f.breaks()) cuts.push_back(g.preimage(b));
  auto slope = [&](const BigReal& x) { return g.slopes()[g.piece_at(x)] * f.slopes()[f.piece_at(g(x))]; };
  return from_cuts(std::move(cuts), slope, f(g(BigReal(0, bits))), bits);
}

PLCircleMap inverse(const PLCircleMap& f) {
  RealVec cuts;
  for (const auto& b : f.breaks()) cuts.push_back(f(b));
  auto slope = [&](const BigReal& y) { return BigReal(1, f.precision()) / f.slopes()[f.piece_at(f.preimage(y))]; };
  return from_cuts(std::move(cuts), slope, f.preimage(BigReal(0, f.precision())), f.precision());
}

PLCircleMap conjugate(const PLCircleMap& f, const PLCircleMap& h) { return compose(h, compose(f, inverse(h))); }

AIET pl_to_aiet(const PLCircleMap& f) {
  const BigReal::Precision bits = f.precision();
  const BigReal tol = tol_bits(bits, 16);
  const BigReal cut = f.preimage(BigReal(0, bits));
  RealVec cuts = f.breaks();
  std::size_t first_bottom = cuts.size();
  bool found = false;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (abs(cuts[i] - cut) <= tol) {
      first_bottom = i;
      found = true;
      break;
    }
  }
  if (!found) {
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), cut);
    first_bottom = static_cast<std::size_t>(it - cuts.begin());
    cuts.insert(it, cut);
  }
  if (first_bottom == 0) throw DomainError("PL map fixes 0; the exchange would be reducible");
  const std::size_t k = cuts.size();
  const auto names = default_alphabet(k);
  std::vector<std::string> bottom;
  for (std::size_t i = first_bottom; i < k; ++i) bottom.push_back(names[i]);
  for (std::size_t i = 0; i < first_bottom; ++i) bottom.push_back(names[i]);
  RealVec len, omega;
  const BigReal one(1, bits);
  for (std::size_t i = 0; i < k; ++i) {
    const BigReal right = i + 1 < k ? cuts[i + 1] : one;
    len.push_back(right - cuts[i]);
    omega.push_back(log(f.slopes()[f.piece_at((cuts[i] + right) / BigReal(2, bits))]));
  }
  return AIET(Perm::from_rows(names, bottom, names), std::move(len), std::move(omega), bits);
}

double mean_nonlinearity(const PiecewiseC2Map& f) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0;
  for (const auto& br : f) {
    if (!(br.right > br.left) || !br.d1 || !br.d2) throw DomainError("bad branch in circle map descriptor");
    constexpr int kGrid = 128;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = br.left + (br.right - br.left) * i / kGrid;
      const double dx = br.d1(x);
      if (!(dx > 0) || !std::isfinite(dx)) throw DomainError("derivative not positive on a branch");
    }
    total += gauss_kronrod<double, 61>::integrate([&](double x) { return br.d2(x) / br.d1(x); }, br.left,
                                                  br.right, 15, 1e-13);
  }
  return total;
}

double mean_nonlinearity(const PLCircleMap&) { return 0.0; }

RotationNumber rotation_number(const PLCircleMap& f, std::uint64_t n_iter) {
  if (n_iter < 1) throw DomainError("rotation number needs at least one iterate");
  const BigReal::Precision bits = f.precision();
  BigReal x(0, bits);
  for (std::uint64_t i = 0; i < n_iter; ++i) x = f.lift(x);
  const BigReal n(static_cast<unsigned long>(n_iter), bits);
  return {x / n, BigReal(1, bits) / n};
}

BigInt CFExpansion::q_at(long k) const {
  if (k == -1) return 0;
  return q.at(static_cast<std::size_t>(k));
}

BigInt CFExpansion::p_at(long k) const {
  if (k == -1) return 1;
  return p.at(static_cast<std::size_t>(k));
}

namespace {

void push_quotient(CFExpansion& cf, const BigInt& a) {
  const long k = static_cast<long>(cf.a.size()) + 1;
  cf.a.push_back(a);
  cf.p.push_back(a * cf.p_at(k - 1) + cf.p_at(k - 2));
  cf.q.push_back(a * cf.q_at(k - 1) + cf.q_at(k - 2));
}

CFExpansion empty_cf() {
  CFExpansion cf;
  cf.p.push_back(0);
  cf.q.push_back(1);
  return cf;
}

std::string prefix_text(const CFExpansion& cf) {
  std::string s = "[";
  for (std::size_t i = 0; i < cf.a.size(); ++i) s += (i ? ", " : "") + cf.a[i].get_str();
  return s + "]";
}

}  // namespace

CFExpansion continued_fraction(const Rational& alpha, std::size_t n) {
  if (sgn(alpha) <= 0 || alpha >= 1) throw DomainError("continued fraction needs 0 < alpha < 1");
  CFExpansion cf = empty_cf();
  BigInt num = alpha.get_num(), den = alpha.get_den();
  while (cf.size() < n) {
    if (num == 0) {
      cf.terminated = true;
      break;
    }
    const BigInt a = den / num;
    const BigInt r = den % num;
    push_quotient(cf, a);
    den = num;
    num = r;
  }
  if (num == 0) cf.terminated = true;
  return cf;
}

CFExpansion trusted_continued_fraction(const BigReal& alpha, std::size_t n) {
  const BigReal::Precision bits = alpha.precision();
  const BigReal zero(0, bits), one(1, bits);
  if (!(alpha > zero) || !(alpha < one)) throw DomainError("continued fraction needs 0 < alpha < 1");
  CFExpansion cf = empty_cf();
  const BigReal ulp = BigReal::pow2(alpha.exponent() - static_cast<long>(bits), bits);
  BigReal lo = BigReal::sub_rounded(alpha, ulp, MPFR_RNDD);
  BigReal hi = BigReal::add_rounded(alpha, ulp, MPFR_RNDU);
  while (cf.size() < n) {
    if (!(lo > zero)) break;
    const BigReal ulo = recip(hi, MPFR_RNDD), uhi = recip(lo, MPFR_RNDU);
    const BigInt a = floor_int(ulo);
    if (floor_int(uhi) != a || a == 0) break;
    const BigReal ar(a, bits);
    BigReal nlo = BigReal::sub_rounded(ulo, ar, MPFR_RNDD);
    BigReal nhi = BigReal::sub_rounded(uhi, ar, MPFR_RNDU);
    push_quotient(cf, a);
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  return cf;
}

CFExpansion continued_fraction(const BigReal& alpha, std::size_t n) {
  CFExpansion cf = trusted_continued_fraction(alpha, n);
  if (cf.size() < n) {
    throw PrecisionExhausted("continued fraction: only " + std::to_string(cf.size()) + " of " +
                             std::to_string(n) + " quotients are determined at " +
                             std::to_string(alpha.precision()) + " bits; trusted prefix " + prefix_text(cf));
  }
  return cf;
}

CircleOrbit::CircleOrbit(const PLCircleMap& f, BigReal x0, std::uint64_t max_iterations)
    : f_(f), max_(max_iterations) {
  lifts_.push_back(at_bits(x0, f.precision()));
}

const BigReal& CircleOrbit::at(std::uint64_t k) {
  if (k > max_) {
    throw ResourceGuard("circle orbit: iterate " + std::to_string(k) + " exceeds the budget of " +
                        std::to_string(max_));
  }
  while (lifts_.size() <= k) lifts_.push_back(f_.lift(lifts_.back()));
  return lifts_[k];
}

BigReal CircleOrbit::tolerance(std::uint64_t k) const {
  return BigReal(static_cast<unsigned long>(k + 1), f_.precision()) * tol_bits(f_.precision(), 40);
}

CFExpansion rotation_continued_fraction(const PLCircleMap& f, std::size_t n, std::uint64_t max_iterations) {
  CircleOrbit orb(f, BigReal(0, f.precision()), max_iterations);
  CFExpansion cf = empty_cf();
  for (std::size_t k = 1; k <= n; ++k) {
    const long kk = static_cast<long>(k);
    const BigInt p2 = cf.p_at(kk - 2), q2 = cf.q_at(kk - 2), p1 = cf.p_at(kk - 1), q1 = cf.q_at(kk - 1);
    const bool below = k % 2 == 0;  // side of p_{k-2}/q_{k-2}
    auto same_side = [&](const BigInt& j) {
      const BigInt p = p2 + j * p1, q = q2 + j * q1;
      if (!q.fits_ulong_p()) throw ResourceGuard("rotation continued fraction: denominator too large");
      const std::uint64_t qi = q.get_ui();
      const BigReal diff = orb.at(qi) - BigReal(p, f.precision());
      if (abs(diff) <= orb.tolerance(qi)) {
        throw DomainError("rotation number appears rational: F^" + q.get_str() + "(0) - " + p.get_str() +
                          " is within the working tolerance");
      }
      return below ? diff.sign() > 0 : diff.sign() < 0;
    };
    // gallop, then bisect for the largest j on the same side
    BigInt good = 1, bad = 2;
    while (same_side(bad)) {
      good = bad;
      bad *= 2;
    }
    while (bad - good > 1) {
      const BigInt mid = (good + bad) / 2;
      if (same_side(mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    push_quotient(cf, good);
  }
  return cf;
}

namespace {

/// I_m^i: from x_i forward for even m, from x_{i+q_m} forward for odd m.
CircleArc make_arc(CircleOrbit& orb, const CFExpansion& cf, std::uint64_t i, long m) {
  const std::uint64_t qm = cf.q_at(m).get_ui();
  const BigReal pm(cf.p_at(m), orb.map().precision());
  const BigReal xi = orb.at(i);
  const BigReal xj = orb.at(i + qm);
  CircleArc arc;
  if (m % 2 == 0) {
    arc = {i, i + qm, frac(xi), xj - xi - pm};
  } else {
    arc = {i + qm, i, frac(xj), xi - (xj - pm)};
  }
  if (!(arc.length > orb.tolerance(i + qm))) {
    throw PrecisionExhausted("dynamical partition: arc I_" + std::to_string(m) + "^" + std::to_string(i) +
                             " is not resolved at the working precision");
  }
  return arc;
}

}  // namespace

DynamicalPartition dynamical_partition(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                       std::uint64_t max_iterations) {
  if (n < 1) throw DomainError("dynamical partition needs n >= 1");
  DynamicalPartition part;
  part.x0 = at_bits(x0, f.precision());
  part.n = n;
  part.cf = rotation_continued_fraction(f, n, max_iterations);
  const long nn = static_cast<long>(n);
  const std::uint64_t qn = part.cf.q_at(nn).get_ui(), qn1 = part.cf.q_at(nn - 1).get_ui();
  if (qn + qn1 > max_iterations) throw ResourceGuard("dynamical partition: q_n + q_(n-1) exceeds the budget");
  CircleOrbit orb(f, part.x0, max_iterations);
  for (std::uint64_t i = 0; i < qn; ++i) part.long_arcs.push_back(make_arc(orb, part.cf, i, nn - 1));
  for (std::uint64_t j = 0; j < qn1; ++j) part.short_arcs.push_back(make_arc(orb, part.cf, j, nn));

  std::vector<const CircleArc*> all;
  for (const auto& a : part.long_arcs) all.push_back(&a);
  for (const auto& a : part.short_arcs) all.push_back(&a);
  std::sort(all.begin(), all.end(), [](const CircleArc* a, const CircleArc* b) { return a->start < b->start; });
  const BigReal tol = orb.tolerance(qn + qn1);
  BigReal total(0, f.precision());
  part.min_gap = BigReal(1, f.precision());
  for (std::size_t k = 0; k < all.size(); ++k) {
    const CircleArc& a = *all[k];
    const CircleArc& b = *all[(k + 1) % all.size()];
    if (a.end_index != b.start_index) {
      throw PrecisionExhausted("dynamical partition: arcs out of cyclic order at orbit index " +
                               std::to_string(a.end_index));
    }
    if (k + 1 < all.size() && !(b.start - a.start > tol)) {
      throw PrecisionExhausted("dynamical partition: orbit points not separated at working precision");
    }
    total += a.length;
    part.min_gap = std::min(part.min_gap, a.length);
  }
  part.covering_error = abs(total - BigReal(1, f.precision()));
  if (part.covering_error > tol * BigReal(static_cast<unsigned long>(all.size()), f.precision())) {
    throw PrecisionExhausted("dynamical partition: arcs do not cover the circle (error " +
                             part.covering_error.to_string(6) + ")");
  }
  return part;
}

RefinementReport check_refinement(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                  std::uint64_t max_iterations) {
  if (n < 1) throw DomainError("refinement check needs n >= 1");
  const CFExpansion cf = rotation_continued_fraction(f, n + 1, max_iterations);
  const long nn = static_cast<long>(n);
  const std::uint64_t qn = cf.q_at(nn).get_ui(), qn1 = cf.q_at(nn - 1).get_ui();
  const BigInt pn = cf.p_at(nn), pn1 = cf.p_at(nn - 1);
  const BigInt& a = cf.a[n];
  if (!a.fits_ulong_p()) throw ResourceGuard("refinement check: partial quotient too large");
  const std::uint64_t aa = a.get_ui();
  CircleOrbit orb(f, at_bits(x0, f.precision()), max_iterations);
  const bool forward = (n - 1) % 2 == 0;
  RefinementReport rep;
  rep.n = n;
  rep.quotient = a;
  rep.holds = true;
  rep.min_margin = BigReal(1, f.precision());
  for (std::uint64_t i = 0; i < qn; ++i) {
    const BigReal xi = orb.at(i);
    // offsets of x_{i + q_{n-1} + j q_n} from x_i along I_{n-1}^i
    BigReal prev;
    for (std::uint64_t j = 0; j <= aa; ++j) {
      const std::uint64_t idx = i + qn1 + j * qn;
      const BigReal p(BigInt(pn1 + BigInt(static_cast<unsigned long>(j)) * pn), f.precision());
      const BigReal diff = orb.at(idx) - xi - p;
      const BigReal off = forward ? diff : -diff;
      const BigReal tol = orb.tolerance(idx);
      if (j > 0) {
        const BigReal gap = prev - off;
        rep.min_margin = std::min(rep.min_margin, gap);
        if (!(gap > tol)) rep.holds = false;
      }
      if (j == aa) {
        rep.min_margin = std::min(rep.min_margin, off);
        if (!(off > tol)) rep.holds = false;
      }
      prev = off;
    }
    ++rep.arcs_checked;
  }
  return rep;
}

namespace {

ReturnBranchPL push_branch(const PLCircleMap& f, const BigReal& left, const BigReal& right, std::uint64_t time,
                           const BigInt& turns) {
  const BigReal::Precision bits = f.precision();
  struct Piece {
    BigReal dom, img, img_right, slope;
  };
  std::vector<Piece> pieces{{left, left, right, BigReal(1, bits)}};
  for (std::uint64_t t = 0; t < time; ++t) {
    std::vector<Piece> next;
    for (const auto& pc : pieces) {
      // split the current image at the lifted break points it contains
      RealVec cuts{pc.img};
      const BigInt n0 = floor_int(pc.img), n1 = floor_int(pc.img_right);
      for (BigInt m = n0; m <= n1; ++m) {
        const BigReal base(m, bits);
        for (const auto& b : f.breaks()) {
          const BigReal c = base + b;
          if (c > pc.img && c < pc.img_right) cuts.push_back(c);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k < cuts.size(); ++k) {
        const BigReal& u = cuts[k];
        const BigReal& v = k + 1 < cuts.size() ? cuts[k + 1] : pc.img_right;
        const BigReal s = f.slopes()[f.piece_at(frac(u))];
        next.push_back({pc.dom + (u - pc.img) / pc.slope, f.lift(u), f.lift(v), pc.slope * s});
      }
    }
    pieces = std::move(next);
  }
  ReturnBranchPL br;
  br.time = time;
  br.turns = turns;
  br.domain = {left, right};
  const BigReal shift(turns, bits);
  for (const auto& pc : pieces) {
    br.cuts.push_back(pc.dom);
    br.slopes.push_back(pc.slope);
    br.images.push_back(pc.img - shift);
  }
  return br;
}

}  // namespace

BigReal evaluate(const ReturnBranchPL& b, const BigReal& x) {
  auto it = std::upper_bound(b.cuts.begin(), b.cuts.end(), x);
  const std::size_t k = it == b.cuts.begin() ? 0 : static_cast<std::size_t>(it - b.cuts.begin()) - 1;
  return b.images[k] + b.slopes[k] * (x - b.cuts[k]);
}

CircleRenormalization circle_renormalization(const PLCircleMap& f, const BigReal& x0, std::size_t n,
                                             std::size_t samples, std::uint64_t max_iterations) {
  if (n < 1) throw DomainError("circle renormalization needs n >= 1");
  const BigReal::Precision bits = f.precision();
  const CFExpansion cf = rotation_continued_fraction(f, n, max_iterations);
  const long nn = static_cast<long>(n);
  CircleOrbit orb(f, at_bits(x0, bits), max_iterations);
  const BigReal base = orb.at(0);
  auto arc_length = [&](long m) {
    const BigReal d = orb.at(cf.q_at(m).get_ui()) - base - BigReal(cf.p_at(m), bits);
    return m % 2 == 0 ? d : -d;
  };
  const BigReal len_short = arc_length(nn), len_long = arc_length(nn - 1);
  // I_m(x0) lies to the right of x0 for even m
  auto arc_of = [&](long m, const BigReal& len) -> RealInterval {
    return m % 2 == 0 ? RealInterval{base, base + len} : RealInterval{base - len, base};
  };
  const RealInterval short_arc = arc_of(nn, len_short), long_arc = arc_of(nn - 1, len_long);
  CircleRenormalization out;
  out.n = n;
  out.x0 = base;
  out.on_short = push_branch(f, short_arc.left, short_arc.right, cf.q_at(nn - 1).get_ui(), cf.p_at(nn - 1));
  out.on_long = push_branch(f, long_arc.left, long_arc.right, cf.q_at(nn).get_ui(), cf.p_at(nn));

  // sampled first-return check
  const BigReal lo = std::min(short_arc.left, long_arc.left);
  const BigReal width = len_short + len_long;
  const std::uint64_t cap = cf.q_at(nn).get_ui() + cf.q_at(nn - 1).get_ui();
  out.max_sample_error = BigReal(0, bits);
  for (std::size_t s = 0; s < samples; ++s) {
    const BigReal y = lo + width * BigReal(static_cast<unsigned long>(2 * s + 1), bits) /
                               BigReal(static_cast<unsigned long>(2 * samples), bits);
    const ReturnBranchPL& br = short_arc.contains(y) ? out.on_short : out.on_long;
    BigReal z = y;
    std::uint64_t t = 0;
    BigReal rel;
    do {
      z = f.lift(z);
      ++t;
      rel = frac(z - lo);
    } while (!(rel < width) && t <= cap);
    const BigReal err = abs(lo + rel - evaluate(br, y));
    if (t != br.time || err > orb.tolerance(cap) * BigReal(16, bits)) {
      throw PrecisionExhausted("circle renormalization: sampled point returned at time " + std::to_string(t) +
                               " (expected " + std::to_string(br.time) + ", image error " + err.to_string(6) +
                               ")");
    }
    out.max_sample_error = std::max(out.max_sample_error, err);
    ++out.sampled;
  }
  return out;
}

PLCircleMap tune_rotation_prefix(const PLCircleMap& g, const std::vector<BigInt>& prefix) {
  if (prefix.size() < 2) throw DomainError("rotation prefix needs at least two quotients");
  if (!g.shift().is_zero()) throw DomainError("tuning family needs a base map fixing 0");
  const BigReal::Precision bits = g.precision();
  CFExpansion cf = empty_cf();
  for (const auto& a : prefix) push_quotient(cf, a);
  const long k = static_cast<long>(prefix.size());
  const std::uint64_t q_prev = cf.q_at(k - 1).get_ui(), q_last = cf.q_at(k).get_ui();
  const BigReal p_prev(cf.p_at(k - 1), bits), p_last(cf.p_at(k), bits);
  // the even convergent lies below ρ, the odd one above
  const bool last_even = k % 2 == 0;
  BigReal lo(0, bits), hi(1, bits);
  for (long it = 0; it < static_cast<long>(bits) - 16; ++it) {
    const BigReal t = (lo + hi) / BigReal(2, bits);
    const PLCircleMap f(g.breaks(), g.slopes(), t, bits);
    CircleOrbit orb(f, BigReal(0, bits), q_last + 1);
    const BigReal d_prev = orb.at(q_prev) - p_prev, d_last = orb.at(q_last) - p_last;
    const BigReal& d_below = last_even ? d_last : d_prev;
    const BigReal& d_above = last_even ? d_prev : d_last;
    const bool below_ok = d_below > orb.tolerance(std::max(q_prev, q_last));
    const bool above_ok = -d_above > orb.tolerance(std::max(q_prev, q_last));
    if (below_ok && above_ok) return f;
    if (!below_ok) {
      lo = t;
    } else {
      hi = t;
    }
  }
  throw PrecisionExhausted("rotation prefix tuning did not separate the convergents at " + std::to_string(bits) +
                           " bits");
}

PLCircleMap golden_two_break_map(BigReal::Precision bits, std::size_t depth) {
  const PLCircleMap g({BigReal(0, bits), BigReal::parse("1/2", bits)},
                      {BigReal::parse("2/3", bits), BigReal::parse("4/3", bits)}, BigReal(0, bits), bits);
  return tune_rotation_prefix(g, std::vector<BigInt>(depth, BigInt(1)));
}

void write_partition_csv(std::ostream& os, const DynamicalPartition& part) {
  os << "kind,start_index,end_index,start,length\n";
  auto row = [&](const char* kind, const CircleArc& a) {
    os << kind << ',' << a.start_index << ',' << a.end_index << ',' << a.start.to_string(30) << ','
       << a.length.to_string(30) << '\n';
  };
  for (const auto& a : part.long_arcs) row("long", a);
  for (const auto& a : part.short_arcs) row("short", a);
}

}  // namespace rauzy
