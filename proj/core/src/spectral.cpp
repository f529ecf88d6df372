#include "rauzy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy/renorm.hpp"

namespace rauzy {

bool Subspace::contains(const RatVec& v) const {
  if (basis.empty()) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
  }
  std::vector<RatVec> rows = basis;
  rows.push_back(v);
  return rank(RatMatrix::from_rows(rows)) == basis.size();
}

namespace {

std::vector<RatVec> kernel_rows(const Perm& p) {
  std::vector<RatVec> rows;
  for (const auto& v : kernel_basis(p)) rows.push_back(to_rational(v));
  return rows;
}

RatVec project_onto(const RatVec& omega, const std::vector<RatVec>& rows) {
  const std::size_t k = rows.size();
  RatVec out(omega.size(), Rational(0));
  if (k == 0) return out;
  RatMatrix gram(k, k);
  RatVec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(rows[i], rows[j]);
    rhs[i] = dot(rows[i], omega);
  }
  const RatVec c = solve(gram, rhs);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t a = 0; a < omega.size(); ++a) out[a] += c[i] * rows[i][a];
  return out;
}

}  // namespace

RatVec project_kernel(const RatVec& omega, const Perm& p) {
  if (omega.size() != p.d()) throw DomainError("vector size differs from alphabet size");
  if (!is_irreducible(p)) throw DomainError("kernel projection needs an irreducible permutation");
  return project_onto(omega, kernel_rows(p));
}

bool KernelInvarianceReport::lengths_route_pass() const {
  return std::all_of(returns.begin(), returns.end(), [](const KernelReturn& r) { return r.lengths_route; });
}

bool KernelInvarianceReport::slopes_route_pass() const {
  return std::all_of(returns.begin(), returns.end(), [](const KernelReturn& r) { return r.slopes_route; });
}

KernelInvarianceReport kernel_projection_invariance_check(const IET& t, const RatVec& omega,
                                                          std::size_t n_blocks) {
  if (omega.size() != t.d()) throw DomainError("vector size differs from alphabet size");
  const auto rows = kernel_rows(t.perm());
  const RatVec base = project_onto(omega, rows);
  const OrbitRecord rec = orbit(t, n_blocks);
  KernelInvarianceReport rep;
  rep.blocks = rec.size();
  for (std::size_t n = 1; n <= rec.size(); ++n) {
    const OrbitLevel& lv = rec.level(n);
    if (!(lv.perm == t.perm())) continue;
    const RatVec by_lengths = lv.cumulative.solve(omega);
    const RatVec by_slopes = lv.cumulative.transpose().apply(omega);
    rep.returns.push_back({n, project_onto(by_lengths, rows) == base, project_onto(by_slopes, rows) == base});
  }
  return rep;
}

Subspace kernel_complement(const Perm& p) {
  const auto rows = kernel_rows(p);
  if (rows.empty()) {
    Subspace all;
    for (std::size_t a = 0; a < p.d(); ++a) {
      RatVec e(p.d(), Rational(0));
      e[a] = 1;
      all.basis.push_back(e);
    }
    return all;
  }
  return {nullspace(RatMatrix::from_rows(rows))};
}

StableSpaces rotation_stable_spaces(const IET& t) {
  if (!is_rotation_type(t.perm())) throw DomainError("closed-form stable spaces need a rotation-type datum");
  StableSpaces s;
  s.central_stable.basis = nullspace(RatMatrix::from_rows({t.lambda()}));
  auto rows = kernel_rows(t.perm());
  rows.push_back(t.lambda());
  s.stable.basis = nullspace(RatMatrix::from_rows(rows));
  return s;
}

const char* to_string(SlopeClass c) noexcept {
  switch (c) {
    case SlopeClass::in_stable:
      return "in_E_s";
    case SlopeClass::in_central_not_stable:
      return "in_E_cs_not_E_s";
    default:
      return "outside_E_cs";
  }
}

SlopeClass log_slope_membership(const RatVec& omega, const IET& t) {
  if (!is_rotation_type(t.perm())) throw DomainError("slope classification needs a rotation-type datum");
  if (omega.size() != t.d()) throw DomainError("vector size differs from alphabet size");
  if (dot(omega, t.lambda()) != 0) return SlopeClass::outside_central;
  for (const auto& v : kernel_rows(t.perm())) {
    if (dot(v, omega) != 0) return SlopeClass::in_central_not_stable;
  }
  return SlopeClass::in_stable;
}

const char* to_string(LyapunovClock c) noexcept {
  return c == LyapunovClock::per_zorich_block ? "per-Zorich-block" : "per-RV-step";
}

double log_bigint(const BigInt& x) {
  if (sgn(x) <= 0) throw DomainError("log of a nonpositive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

LyapunovEstimate lyapunov_top(std::size_t d, const Perm& start, std::size_t n_blocks, std::size_t samples,
                              std::uint64_t seed, const LyapunovOptions& opt, LyapunovClock clock) {
  if (samples < 1) throw DomainError("lyapunov estimate needs at least one sample");
  if (start.d() != d) throw DomainError("starting permutation has the wrong size");
  if (!is_irreducible(start)) throw DomainError("starting permutation must be irreducible");
  LyapunovEstimate est;
  est.n_blocks = n_blocks;
  est.normalization = clock;
  if (n_blocks == 0) {
    est.samples = samples;
    return est;
  }
  struct Slot {
    bool ok = false;
    double per_block = 0, per_rv = 0;
  };
  std::vector<Slot> slots(samples);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < samples; i += step) {
      auto rng = make_stream(seed, i);
      const IET t = build_iet(random_simplex_point(rng, d, opt.bits), start);
      OrbitOptions o;
      o.record_levels = false;
      o.record_matrices = false;
      o.stop_on_tie = true;
      try {
        const OrbitRecord rec = orbit(t, n_blocks, o);
        if (rec.size() < n_blocks) continue;
        const auto& h = rec.last().heights;
        const double lh = log_bigint(*std::max_element(h.begin(), h.end()));
        slots[i] = {true, lh / static_cast<double>(n_blocks),
                    lh / static_cast<double>(rec.last().rv_steps)};
      } catch (const ResourceGuard&) {
      }
    }
  };
  const unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& th : pool) th.join();
  }
  // merge in sample order so the result does not depend on scheduling
  double sb = 0, sr = 0;
  for (const auto& s : slots) {
    if (!s.ok) {
      ++est.skipped;
      continue;
    }
    ++est.samples;
    est.per_sample_block.push_back(s.per_block);
    est.per_sample_rv.push_back(s.per_rv);
    sb += s.per_block;
    sr += s.per_rv;
  }
  if (est.samples > 0) {
    est.theta_per_block = sb / static_cast<double>(est.samples);
    est.theta_per_rv_step = sr / static_cast<double>(est.samples);
  }
  est.theta_top = clock == LyapunovClock::per_zorich_block ? est.theta_per_block : est.theta_per_rv_step;
  return est;
}

void write_lyapunov_csv(std::ostream& os, const LyapunovEstimate& est) {
  os << "sample,theta_per_zorich_block,theta_per_rv_step\n";
  char buf[64];
  for (std::size_t i = 0; i < est.per_sample_block.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", est.per_sample_block[i], est.per_sample_rv[i]);
    os << i << ',' << buf << '\n';
  }
}

}  // namespace rauzy
