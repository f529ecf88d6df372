#include "rauzy/aiet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy/spectral.hpp"

namespace rauzy {

namespace {

BigReal rounded(const BigReal& x, BigReal::Precision bits) {
  return x.precision() == bits ? x : x.with_precision(bits);
}

BigReal real_sum(const RealVec& v, BigReal::Precision bits) {
  BigReal s(0, bits);
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace

AIET::AIET(Perm perm, RealVec lengths, RealVec log_slope, BigReal::Precision bits)
    : perm_(std::move(perm)), lengths_(std::move(lengths)), omega_(std::move(log_slope)), bits_(bits) {
  const std::size_t d = perm_.d();
  if (lengths_.size() != d || omega_.size() != d) throw DomainError("AIET vectors differ from alphabet size");
  for (auto& x : lengths_) {
    x = rounded(x, bits_);
    if (x.sign() <= 0 || !x.is_finite()) throw DomainError("AIET lengths must be positive");
  }
  for (auto& x : omega_) {
    x = rounded(x, bits_);
    if (!x.is_finite()) throw DomainError("AIET log-slopes must be finite");
  }
  slopes_.clear();
  for (const auto& w : omega_) slopes_.push_back(exp(w));
  const BigReal tol = BigReal::pow2(-(static_cast<long>(bits_) - 8), bits_);
  const BigReal one(1, bits_);
  if (abs(real_sum(lengths_, bits_) - one) > tol) throw DomainError("AIET domains do not tile [0,1)");
  BigReal img(0, bits_);
  for (std::size_t a = 0; a < d; ++a) img += lengths_[a] * slopes_[a];
  if (abs(img - one) > tol) {
    throw DomainError("AIET images do not tile [0,1): sum of l*exp(w) is " + img.to_string(20));
  }
  layout();
}

AIET AIET::trusted(Perm perm, RealVec lengths, RealVec log_slope, RealVec slopes, BigReal::Precision bits) {
  AIET f;
  f.perm_ = std::move(perm);
  f.lengths_ = std::move(lengths);
  f.omega_ = std::move(log_slope);
  f.slopes_ = std::move(slopes);
  f.bits_ = bits;
  f.layout();
  return f;
}

void AIET::layout() {
  const std::size_t d = perm_.d();
  left_.assign(d, BigReal(0, bits_));
  image_left_.assign(d, BigReal(0, bits_));
  BigReal acc(0, bits_);
  for (Letter a : perm_.top()) {
    left_[a] = acc;
    acc += lengths_[a];
  }
  acc = BigReal(0, bits_);
  for (Letter a : perm_.bottom()) {
    image_left_[a] = acc;
    acc += lengths_[a] * slopes_[a];
  }
}

RealInterval AIET::domain(Letter a) const { return {left_.at(a), left_.at(a) + lengths_.at(a)}; }

RealInterval AIET::image(Letter a) const {
  return {image_left_.at(a), image_left_.at(a) + lengths_.at(a) * slopes_.at(a)};
}

Letter AIET::letter_at(const BigReal& x) const {
  if (x.sign() < 0 || x >= BigReal(1, bits_)) throw DomainError("point outside [0,1)");
  const auto& top = perm_.top();
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

AIET build_aiet(const Perm& perm, const RealVec& lengths, const RealVec& log_slope) {
  BigReal::Precision bits = BigReal::default_precision();
  for (const auto& x : lengths) bits = std::max(bits, x.precision());
  for (const auto& x : log_slope) bits = std::max(bits, x.precision());
  return AIET(perm, lengths, log_slope, bits);
}

AIET aiet_from_iet(const IET& t, BigReal::Precision bits) {
  RealVec len, omega;
  for (const auto& x : t.lambda()) {
    len.emplace_back(x, bits);
    omega.emplace_back(0, bits);
  }
  // exact rationals rounded independently may miss the sum by an ulp
  const BigReal s = real_sum(len, bits);
  for (auto& x : len) x /= s;
  return AIET(t.perm(), std::move(len), std::move(omega), bits);
}

AIET aiet_with_shifted_slopes(const Perm& perm, const RealVec& lengths, RealVec log_slope) {
  BigReal::Precision bits = BigReal::default_precision();
  for (const auto& x : lengths) bits = std::max(bits, x.precision());
  RealVec len;
  for (const auto& x : lengths) len.push_back(rounded(x, bits));
  const BigReal s = real_sum(len, bits);
  for (auto& x : len) x /= s;
  BigReal img(0, bits);
  for (std::size_t a = 0; a < len.size(); ++a) img += len[a] * exp(rounded(log_slope.at(a), bits));
  const BigReal shift = log(img);
  for (auto& w : log_slope) w = rounded(w, bits) - shift;
  return AIET(perm, std::move(len), std::move(log_slope), bits);
}

BigReal aiet_evaluate(const AIET& f, const BigReal& x) {
  const Letter a = f.letter_at(x);
  const RealInterval dom = f.domain(a);
  return f.image(a).left + f.slopes()[a] * (x - dom.left);
}

namespace {

/// Mutable induction state; avoids re-validating at every step.
struct State {
  Perm perm;
  RealVec len, omega, slope;
  BigReal::Precision bits;
  std::uint64_t steps = 0;

  explicit State(const AIET& f)
      : perm(f.perm()), len(f.lengths()), omega(f.log_slope()), slope(f.slopes()), bits(f.precision()) {}

  MoveType decide() const {
    const Letter t = perm.last_top(), b = perm.last_bottom();
    const BigReal diff = len[t] - len[b] * slope[b];
    const BigReal tol = BigReal::pow2(-(static_cast<long>(bits) - 16), bits);
    if (abs(diff) <= tol) {
      throw TieUndecidable("affine tie at step " + std::to_string(steps) + ": last domain " +
                               len[t].to_string(24) + " vs last image " + (len[b] * slope[b]).to_string(24) +
                               " (tolerance " + tol.to_string(6) + ")",
                           static_cast<std::int64_t>(steps));
    }
    return diff.sign() > 0 ? MoveType::top : MoveType::bottom;
  }

  /// Applies one step of the given type; returns the step and the length of
  /// the induction interval before rescaling.
  std::pair<RVStep, BigReal> apply(MoveType type) {
    const Letter t = perm.last_top(), b = perm.last_bottom();
    RVStep s;
    if (type == MoveType::top) {
      s = {type, t, b};
      len[t] -= len[b] * slope[b];
      omega[b] += omega[t];
      slope[b] = exp(omega[b]);
    } else {
      s = {type, b, t};
      const BigReal moved = len[t] / slope[b];
      len[b] -= moved;
      len[t] = moved;
      omega[t] += omega[b];
      slope[t] = exp(omega[t]);
    }
    BigReal scale = real_sum(len, bits);
    for (auto& x : len) x /= scale;
    perm = successor(perm, type);
    ++steps;
    return {s, std::move(scale)};
  }

  AIET snapshot() const { return AIET::trusted(perm, len, omega, slope, bits); }
};

}  // namespace

GietStep giet_rv_step(const AIET& f) {
  State st(f);
  const MoveType type = st.decide();
  auto [s, scale] = st.apply(type);
  return {st.snapshot(), s, std::move(scale)};
}

const char* to_string(InductionStatus s) noexcept {
  switch (s) {
    case InductionStatus::complete: return "complete";
    case InductionStatus::tie: return "tie";
    case InductionStatus::precision_exhausted: return "precision_exhausted";
    case InductionStatus::step_cap: return "step_cap";
  }
  return "unknown";
}

bool precision_valid(const RealVec& lengths, const BigReal& scale, BigReal::Precision bits) {
  long worst = 0;
  for (const auto& x : lengths) {
    if (x.sign() <= 0) return false;
    worst = std::max(worst, -x.exponent());
  }
  const long bits_l = static_cast<long>(bits);
  if (worst + 32 >= bits_l) return false;
  const long lost = scale.is_zero() ? bits_l : -scale.exponent();
  return lost + worst + 32 < bits_l;
}

AietOrbit aiet_orbit(const AIET& f, std::size_t n_blocks, const AietOrbitOptions& opt) {
  const std::size_t d = f.d();
  State st(f);
  AietOrbit out;
  BigReal scale(1, f.precision());
  out.levels.push_back({f.perm(), f.lengths(), f.log_slope(), BigReal(0, f.precision()), 0});
  out.heights.assign(d, BigInt(1));
  IntMatrix cum = IntMatrix::identity(d);
  if (opt.keep_cumulative) out.cumulative.push_back(cum);

  std::optional<MoveType> next;
  try {
    next = st.decide();
  } catch (const TieUndecidable&) {
    out.status = InductionStatus::tie;
    return out;
  }
  for (std::size_t n = 0; n < n_blocks; ++n) {
    const MoveType type = *next;
    PathRun run{st.perm, type, 0};
    bool stop = false;
    for (;;) {
      if (st.steps >= opt.max_rv_steps) {
        out.status = InductionStatus::step_cap;
        stop = true;
        break;
      }
      auto [s, sc] = st.apply(type);
      scale *= sc;
      out.heights[s.loser] += out.heights[s.winner];
      if (opt.keep_cumulative) cum.add_column(s.loser, s.winner);
      ++run.z;
      try {
        next = st.decide();
      } catch (const TieUndecidable&) {
        out.status = InductionStatus::tie;
        stop = true;
        break;
      }
      // a run that never ends (an attracting cycle) still loses bits
      if (!precision_valid(st.len, scale, st.bits)) {
        out.status = InductionStatus::precision_exhausted;
        stop = true;
        break;
      }
      if (*next != type) break;
    }
    if (stop) break;
    out.path.push_back(std::move(run));
    out.levels.push_back({st.perm, st.len, st.omega, log(scale), st.steps});
    if (opt.keep_cumulative) out.cumulative.push_back(cum);
  }
  return out;
}

SlopeCocycleReport log_slope_cocycle_check(const AIET& f, std::size_t n_blocks) {
  AietOrbitOptions opt;
  opt.keep_cumulative = true;
  const AietOrbit orb = aiet_orbit(f, n_blocks, opt);
  SlopeCocycleReport rep;
  rep.status = orb.status;
  rep.precision = f.precision();
  rep.blocks = orb.blocks();
  const std::size_t d = f.d();
  const BigReal::Precision bits = f.precision();
  for (std::size_t n = 1; n < orb.levels.size(); ++n) {
    const IntMatrix& b = orb.cumulative[n];
    BigReal num(0, bits), den(0, bits);
    for (std::size_t a = 0; a < d; ++a) {
      BigReal pred(0, bits);
      for (std::size_t r = 0; r < d; ++r) pred += BigReal(b(r, a), bits) * f.log_slope()[r];
      num = std::max(num, abs(orb.levels[n].log_slope[a] - pred));
      den = std::max(den, abs(pred));
    }
    const double dev = num.is_zero() ? 0.0 : (den.is_zero() ? INFINITY : (num / den).to_double());
    rep.per_block.push_back(dev);
    rep.max_relative_deviation = std::max(rep.max_relative_deviation, dev);
  }
  return rep;
}

namespace {

// Σ_{m<c} e^{mω}
BigReal geometric_sum(const Rational& omega, std::uint64_t c, BigReal::Precision bits) {
  if (sgn(omega) == 0) return BigReal(BigInt(c), bits);
  const BigReal w(omega, bits);
  return expm1(BigReal(BigInt(c), bits) * w) / expm1(w);
}

struct Backward {
  RealVec lengths;     ///< at the start of the prefix, unnormalized
  long min_exponent;   ///< smallest length exponent at any block boundary
};

// Lengths at the start of the prefix from the terminal shape. Each run is
// undone in closed form: losers of a top run keep their length, the winner
// gains a geometric sum; in a bottom run each loser also scales by e^{cω_w}.
Backward backward_lengths(const RotationPath& prefix, const RatVec& omega, const RatVec& terminal_shape,
                          BigReal::Precision bits) {
  if (prefix.empty()) throw DomainError("empty path prefix");
  const std::size_t d = prefix.front().perm.d();
  if (omega.size() != d || terminal_shape.size() != d) throw DomainError("vector size differs from alphabet");
  for (const auto& x : terminal_shape) {
    if (sgn(x) <= 0) throw DomainError("terminal lengths must be positive");
  }
  // log-slopes at the start of each run, exact
  std::vector<RatVec> run_omega;
  std::vector<RunCycle> cycles;
  RatVec w = omega;
  for (const auto& run : prefix) {
    run_omega.push_back(w);
    cycles.push_back(run_cycle(run.perm, run.type));
    const auto& c = cycles.back();
    const std::uint64_t k = c.losers.size();
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t count = run.z / k + (i < run.z % k ? 1 : 0);
      w[c.losers[i]] += Rational(BigInt(count)) * w[c.winner];
    }
  }
  // terminal lengths: the shape, rescaled on each sign class of e^w - 1 so that
  // domains and images have the same total
  RealVec len(d), g(d);
  BigReal pos(0, bits), neg(0, bits);
  for (std::size_t a = 0; a < d; ++a) {
    len[a] = BigReal(terminal_shape[a], bits);
    g[a] = expm1(BigReal(w[a], bits));
    if (g[a].sign() > 0) pos += len[a] * g[a];
    if (g[a].sign() < 0) neg -= len[a] * g[a];
  }
  if (pos.sign() > 0 || neg.sign() > 0) {
    if (pos.is_zero() || neg.is_zero()) {
      throw DomainError("terminal log-slope has one sign; no lengths make the images tile");
    }
    for (std::size_t a = 0; a < d; ++a) {
      if (g[a].sign() > 0) len[a] *= neg;
      if (g[a].sign() < 0) len[a] *= pos;
    }
  }
  auto smallest = [&] {
    long e = len.front().exponent();
    for (const auto& x : len) e = std::min(e, x.exponent());
    return e;
  };
  long min_exp = smallest();
  for (std::size_t r = prefix.size(); r-- > 0;) {
    const auto& run = prefix[r];
    const auto& c = cycles[r];
    const std::uint64_t k = c.losers.size();
    const Letter win = c.winner;
    const Rational& ww = run_omega[r][win];
    for (std::uint64_t i = 0; i < k && i < run.z; ++i) {
      const Letter l = c.losers[i];
      const std::uint64_t count = run.z / k + (i < run.z % k ? 1 : 0);
      if (run.type == MoveType::bottom) {
        len[win] += len[l] * geometric_sum(ww, count, bits);
        len[l] *= exp(BigReal(Rational(BigInt(count)) * ww, bits));
      } else {
        len[win] += len[l] * exp(BigReal(run_omega[r][l], bits)) * geometric_sum(ww, count, bits);
      }
    }
    min_exp = std::min(min_exp, smallest());
  }
  return {std::move(len), min_exp};
}

}  // namespace

BigReal::Precision path_precision(const RotationPath& prefix, const RatVec& omega, const RatVec& terminal_shape,
                                  BigReal::Precision cap) {
  const Backward b = backward_lengths(prefix, omega, terminal_shape, 128);
  const long depth = real_sum(b.lengths, 128).exponent() - b.min_exponent;
  // the guard of precision_valid plus a margin; near-ties amplify rounding
  // beyond what the lengths show, so the estimate is checked by running it
  auto bits = static_cast<BigReal::Precision>(std::max(0L, depth) + 32 + 96);
  const std::size_t blocks = prefix.size() - 1;
  for (;; bits *= 2) {
    if (bits > cap) throw ResourceGuard("path needs more than " + std::to_string(cap) + " bits");
    const AietOrbit orb = aiet_orbit(aiet_over_path(prefix, omega, terminal_shape, bits), blocks);
    if (orb.blocks() == blocks && std::equal(orb.path.begin(), orb.path.end(), prefix.begin())) return bits;
  }
}

AIET aiet_over_path(const RotationPath& prefix, const RatVec& omega, const RatVec& terminal_shape,
                    BigReal::Precision bits) {
  Backward b = backward_lengths(prefix, omega, terminal_shape, bits);
  RealVec len = std::move(b.lengths);
  const BigReal total = real_sum(len, bits);
  for (auto& x : len) x /= total;
  RealVec om;
  for (const auto& x : omega) om.emplace_back(x, bits);
  return AIET(prefix.front().perm, std::move(len), std::move(om), bits);
}

AIET aiet_over_iet(const IET& t, std::size_t n_blocks, const RatVec& omega, BigReal::Precision bits) {
  OrbitOptions opt;
  opt.record_matrices = false;
  opt.record_levels = false;
  const OrbitRecord rec = orbit(t, n_blocks + 1, opt);
  return aiet_over_path(rotation_path(rec), omega, rec.lambda(rec.size()), bits);
}

MeasureWeights invariant_measure_weights(const RotationPath& path, std::size_t n_blocks,
                                         const MeasureOptions& opt) {
  if (n_blocks == 0 || path.size() < n_blocks) throw DomainError("path shorter than the requested depth");
  const std::size_t d = path.front().perm.d();
  RotationPath head(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n_blocks));
  std::vector<RunCycle> cycles;
  for (const auto& run : head) cycles.push_back(run_cycle(run.perm, run.type));

  auto counts = [](const PathRun& run, std::size_t k, std::size_t i) {
    return BigInt(run.z / k + (i < run.z % k ? 1 : 0));
  };
  // heights forward
  std::vector<IntVec> heights{IntVec(d, BigInt(1))};
  for (std::size_t r = 0; r < n_blocks; ++r) {
    IntVec h = heights.back();
    const auto& c = cycles[r];
    for (std::size_t i = 0; i < c.losers.size(); ++i) {
      h[c.losers[i]] += counts(head[r], c.losers.size(), i) * h[c.winner];
    }
    heights.push_back(std::move(h));
  }
  // B_{n,N} 1 backward
  std::vector<IntVec> v(n_blocks + 1);
  v[n_blocks].assign(d, BigInt(1));
  for (std::size_t r = n_blocks; r-- > 0;) {
    IntVec x = v[r + 1];
    const auto& c = cycles[r];
    for (std::size_t i = 0; i < c.losers.size(); ++i) {
      x[c.winner] += counts(head[r], c.losers.size(), i) * v[r + 1][c.losers[i]];
    }
    v[r] = std::move(x);
  }
  const BigInt total = sum(v[0]);

  MeasureWeights out;
  out.depth = n_blocks;
  for (const auto& x : v[0]) {
    Rational q(x, total);
    q.canonicalize();
    out.lambda_hat.push_back(q);
  }
  // spread of the normalized columns of B^N
  const IntMatrix b = path_matrix(head);
  double spread = 0;
  for (std::size_t r = 0; r < d; ++r) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t c = 0; c < d; ++c) {
      BigInt colsum = 0;
      for (std::size_t k = 0; k < d; ++k) colsum += b(k, c);
      const double x = Rational(b(r, c), colsum).get_d();
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    spread = std::max(spread, hi - lo);
  }
  out.cone_spread = spread;
  if (spread > opt.cone_tolerance) {
    throw ResourceGuard("cone spread " + std::to_string(spread) + " above tolerance after " +
                        std::to_string(n_blocks) + " blocks; a longer orbit is required");
  }
  for (std::size_t n = 0; n <= n_blocks; ++n) {
    RatVec m, wgt;
    for (std::size_t a = 0; a < d; ++a) {
      Rational q(v[n][a], total), h(heights[n][a] * v[n][a], total);
      q.canonicalize();
      h.canonicalize();
      m.push_back(q);
      wgt.push_back(h);
    }
    out.base_measure.push_back(std::move(m));
    out.tower_weight.push_back(std::move(wgt));
  }
  return out;
}

MeasureWeights invariant_measure_weights(const AIET& f, std::size_t n_blocks, const MeasureOptions& opt) {
  const AietOrbit orb = aiet_orbit(f, n_blocks);
  if (orb.blocks() < n_blocks) {
    throw NotRenormalizable(std::string("affine induction stopped early: ") + to_string(orb.status),
                            static_cast<std::int64_t>(orb.blocks()));
  }
  return invariant_measure_weights(orb.path, n_blocks, opt);
}

DimensionTrace local_dimension_estimates(const AIET& f, std::size_t n_blocks, std::size_t lookahead,
                                         const MeasureOptions& opt) {
  const AietOrbit orb = aiet_orbit(f, n_blocks + lookahead);
  DimensionTrace tr;
  tr.status = orb.status;
  tr.precision = f.precision();
  // a short run still reports the levels its measure estimate supports
  if (orb.blocks() <= lookahead) return tr;
  const std::size_t depth = orb.blocks();
  const std::size_t upto = depth - lookahead;
  MeasureWeights mw;
  try {
    mw = invariant_measure_weights(orb.path, depth, opt);
  } catch (const ResourceGuard&) {
    // a run cut short by precision keeps its own status
    if (orb.status == InductionStatus::complete) throw;
    return tr;
  }
  tr.cone_spread = mw.cone_spread;
  const double ln10 = std::log(10.0);
  for (std::size_t n = 1; n <= upto; ++n) {
    const auto& lvl = orb.levels[n];
    DimensionLevel dl;
    dl.n = n;
    dl.rv_steps = lvl.rv_steps;
    dl.log10_interval = lvl.log_scale.to_double() / ln10;
    double acc = 0, wsum = 0;
    for (std::size_t a = 0; a < f.d(); ++a) {
      const double log_mu = log_bigint(mw.base_measure[n][a].get_num()) - log_bigint(mw.base_measure[n][a].get_den());
      const double log_len = (log(lvl.lengths[a]) + lvl.log_scale).to_double();
      const double ratio = log_mu / log_len;
      const double wgt = mw.tower_weight[n][a].get_d();
      dl.ratio.push_back(ratio);
      acc += wgt * ratio;
      wsum += wgt;
    }
    dl.estimate = acc / wsum;
    tr.levels.push_back(std::move(dl));
  }
  return tr;
}

FloorDimension floor_sampled_dimension(const AIET& f, std::size_t n_blocks, std::size_t samples,
                                       std::uint64_t seed, std::size_t lookahead, const MeasureOptions& opt) {
  const AietOrbit orb = aiet_orbit(f, n_blocks + lookahead);
  if (orb.blocks() < n_blocks + lookahead) {
    throw NotRenormalizable(std::string("affine induction stopped early: ") + to_string(orb.status),
                            static_cast<std::int64_t>(orb.blocks()));
  }
  const std::size_t d = f.d();
  const MeasureWeights mw = invariant_measure_weights(orb.path, orb.blocks(), opt);
  // heights and log-slopes at the start of every run
  std::vector<IntVec> heights{IntVec(d, BigInt(1))};
  std::vector<RunCycle> cycles;
  for (std::size_t r = 0; r < n_blocks; ++r) {
    cycles.push_back(run_cycle(orb.path[r].perm, orb.path[r].type));
    IntVec h = heights.back();
    const auto& c = cycles.back();
    const std::uint64_t k = c.losers.size(), z = orb.path[r].z;
    for (std::size_t i = 0; i < k; ++i) h[c.losers[i]] += BigInt(z / k + (i < z % k ? 1 : 0)) * h[c.winner];
    heights.push_back(std::move(h));
  }
  std::vector<std::vector<double>> omega;
  for (std::size_t r = 0; r <= n_blocks; ++r) {
    omega.emplace_back();
    for (const auto& w : orb.levels[r].log_slope) omega.back().push_back(w.to_double());
  }
  const auto& lvl = orb.levels[n_blocks];
  std::vector<double> log_mu(d), log_len(d), cum(d);
  double acc = 0;
  for (std::size_t a = 0; a < d; ++a) {
    const Rational& m = mw.base_measure[n_blocks][a];
    log_mu[a] = log_bigint(m.get_num()) - log_bigint(m.get_den());
    log_len[a] = (log(lvl.lengths[a]) + lvl.log_scale).to_double();
    acc += mw.tower_weight[n_blocks][a].get_d();
    cum[a] = acc;
  }
  auto rng = make_stream(seed, n_blocks);
  std::vector<double> ratios;
  for (std::size_t s = 0; s < samples; ++s) {
    const double u = uniform01(rng) * acc;
    Letter cur = static_cast<Letter>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (cur >= d) cur = static_cast<Letter>(d - 1);
    const Letter start = cur;
    const std::size_t bits = mpz_sizeinbase(heights[n_blocks][cur].get_mpz_t(), 2) + 64;
    BigInt j = random_bits(rng, bits) % heights[n_blocks][cur];
    double log_gain = 0;  // log of the derivative of f^j on the base
    for (std::size_t r = n_blocks; r-- > 0;) {
      const auto& c = cycles[r];
      const std::uint64_t k = c.losers.size(), z = orb.path[r].z;
      const auto it = std::find(c.losers.begin(), c.losers.end(), cur);
      if (it == c.losers.end()) continue;
      const auto i = static_cast<std::uint64_t>(it - c.losers.begin());
      const BigInt count(z / k + (i < z % k ? 1 : 0));
      const BigInt& hw = heights[r][c.winner];
      const BigInt& hl = heights[r][cur];
      const double ww = omega[r][c.winner];
      if (orb.path[r].type == MoveType::top) {
        // old loser tower, then `count` winner towers
        if (j < hl) continue;
        j -= hl;
        const BigInt q = j / hw;
        log_gain += omega[r][cur] + q.get_d() * ww;
        j -= q * hw;
        cur = c.winner;
      } else {
        // `count` winner towers, then the old loser tower
        const BigInt front = count * hw;
        if (j < front) {
          const BigInt q = j / hw;
          log_gain += q.get_d() * ww;
          j -= q * hw;
          cur = c.winner;
        } else {
          j -= front;
          log_gain += count.get_d() * ww;
        }
      }
    }
    ratios.push_back(log_mu[start] / (log_len[start] + log_gain));
  }
  std::sort(ratios.begin(), ratios.end());
  FloorDimension out;
  out.n = n_blocks;
  out.samples = ratios.size();
  if (!ratios.empty()) {
    out.median = ratios[ratios.size() / 2];
    out.q10 = ratios[ratios.size() / 10];
    out.q90 = ratios[(9 * ratios.size()) / 10];
  }
  return out;
}

void write_dimension_csv(std::ostream& os, const DimensionTrace& trace) {
  os << "# precision_bits=" << trace.precision << " status=" << to_string(trace.status)
     << " cone_spread=" << trace.cone_spread << "\n";
  os << "n,rv_steps,log10_interval,estimate";
  const std::size_t d = trace.levels.empty() ? 0 : trace.levels.front().ratio.size();
  for (std::size_t a = 0; a < d; ++a) os << ",ratio_" << a;
  os << "\n";
  os.precision(12);
  for (const auto& l : trace.levels) {
    os << l.n << ',' << l.rv_steps << ',' << l.log10_interval << ',' << l.estimate;
    for (double r : l.ratio) os << ',' << r;
    os << "\n";
  }
}

}  // namespace rauzy
