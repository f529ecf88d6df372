#include "rauzy/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rauzy/error.hpp"

namespace rauzy {

IntMatrix RVStep::matrix(std::size_t d) const {
  IntMatrix a = IntMatrix::identity(d);
  a(winner, loser) += 1;
  return a;
}

namespace {

RVStep step_for(const Perm& p, MoveType t) {
  return t == MoveType::top ? RVStep{t, p.last_top(), p.last_bottom()}
                            : RVStep{t, p.last_bottom(), p.last_top()};
}

/// Rauzy-Veech induction on integer length numerators, with heights and
/// optionally the cumulative matrix carried along. Zorich blocks skip whole
/// cycles of losers at once.
struct Engine {
  Perm perm;
  IntVec len;
  IntVec heights;
  IntMatrix cumulative;
  bool track_matrix = false;
  std::uint64_t steps = 0;
  std::uint64_t max_steps = UINT64_MAX;

  MoveType type() const {
    const int c = cmp(len[perm.last_top()], len[perm.last_bottom()]);
    if (c == 0) {
      throw NotRenormalizable("tie between the last intervals at step " + std::to_string(steps),
                              static_cast<std::int64_t>(steps));
    }
    return c > 0 ? MoveType::top : MoveType::bottom;
  }

  // column/entry updates for `count` repetitions of loser += winner
  void apply(Letter w, Letter l, const BigInt& count, IntMatrix* block) {
    len[w] -= count * len[l];
    heights[l] += count * heights[w];
    const std::size_t d = perm.d();
    if (track_matrix) {
      for (std::size_t r = 0; r < d; ++r) cumulative(r, l) += count * cumulative(r, w);
    }
    if (block) {
      for (std::size_t r = 0; r < d; ++r) (*block)(r, l) += count * (*block)(r, w);
    }
  }

  ZorichBlock block(bool record_matrix) {
    const MoveType t = type();
    const std::size_t d = perm.d();
    const RVStep first = step_for(perm, t);
    const Letter w = first.winner;
    ZorichBlock out{t, 0, w, first.loser, perm, perm, steps, IntMatrix()};
    IntMatrix blk = record_matrix ? IntMatrix::identity(d) : IntMatrix();
    IntMatrix* blk_ptr = record_matrix ? &blk : nullptr;

    const auto& row = t == MoveType::top ? perm.bottom() : perm.top();
    const std::size_t pw = t == MoveType::top ? perm.pos_bottom(w) : perm.pos_top(w);
    const std::vector<Letter> cycle(row.begin() + static_cast<std::ptrdiff_t>(pw) + 1, row.end());
    BigInt cycle_sum = 0, cycle_max = 0;
    for (Letter x : cycle) {
      cycle_sum += len[x];
      if (len[x] > cycle_max) cycle_max = len[x];
    }
    // Whole cycles are safe while the winner stays longer than every loser.
    if (len[w] > cycle_max + cycle_sum) {
      BigInt c = (len[w] - cycle_max - 1) / cycle_sum;
      if (c > 0) {
        const BigInt total = c * static_cast<unsigned long>(cycle.size());
        if (!total.fits_ulong_p() || total.get_ui() > max_steps - steps) {
          throw ResourceGuard("Rauzy-Veech step guard exceeded");
        }
        len[w] -= c * cycle_sum;
        for (Letter x : cycle) {
          heights[x] += c * heights[w];
          if (track_matrix) {
            for (std::size_t r = 0; r < d; ++r) cumulative(r, x) += c * cumulative(r, w);
          }
          if (blk_ptr) {
            for (std::size_t r = 0; r < d; ++r) blk(r, x) += c * blk(r, w);
          }
        }
        steps += total.get_ui();
        out.z += total.get_ui();
      }
    }
    for (;;) {
      const RVStep s = step_for(perm, t);
      const int c = cmp(len[s.winner], len[s.loser]);
      if (c < 0 && out.z > 0) break;
      if (c == 0) {
        throw NotRenormalizable("tie between the last intervals at step " + std::to_string(steps),
                                static_cast<std::int64_t>(steps));
      }
      if (steps >= max_steps) throw ResourceGuard("Rauzy-Veech step guard exceeded");
      apply(s.winner, s.loser, 1, blk_ptr);
      perm = successor(perm, t);
      out.last_loser = s.loser;
      ++steps;
      ++out.z;
    }
    out.perm_after = perm;
    if (record_matrix) out.matrix = std::move(blk);
    return out;
  }
};

BigInt common_denominator(const RatVec& v) {
  BigInt den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  return den;
}

Engine make_engine(const IET& t, const BigInt& den, bool track_matrix) {
  Engine e;
  e.perm = t.perm();
  e.len.resize(t.d());
  for (std::size_t i = 0; i < t.d(); ++i) e.len[i] = t.lambda()[i].get_num() * (den / t.lambda()[i].get_den());
  e.heights.assign(t.d(), BigInt(1));
  e.track_matrix = track_matrix;
  if (track_matrix) e.cumulative = IntMatrix::identity(t.d());
  return e;
}

RatVec lengths_from(const IntVec& num, const BigInt& den) {
  RatVec out;
  out.reserve(num.size());
  for (const auto& x : num) {
    Rational q(x, den);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

MoveType rv_type(const IET& t) {
  const auto& lam = t.lambda();
  const int c = cmp(lam[t.perm().last_top()], lam[t.perm().last_bottom()]);
  if (c == 0) throw NotRenormalizable("tie between the last intervals", 0);
  return c > 0 ? MoveType::top : MoveType::bottom;
}

std::pair<IET, RVStep> rv_step(const IET& t) {
  const MoveType type = rv_type(t);
  const RVStep s = step_for(t.perm(), type);
  RatVec lam = t.lambda();
  lam[s.winner] -= lam[s.loser];
  return {IET(successor(t.perm(), type), normalize_sum(lam)), s};
}

std::optional<IET> rv_predecessor(const IET& t, MoveType type) {
  auto pred = predecessor(t.perm(), type);
  if (!pred) return std::nullopt;
  const RVStep s = step_for(*pred, type);
  RatVec lam = t.lambda();
  lam[s.winner] += lam[s.loser];
  return IET(*pred, normalize_sum(lam));
}

std::pair<IET, ZorichBlock> zorich_step(const IET& t) {
  const BigInt den = common_denominator(t.lambda());
  Engine e = make_engine(t, den, false);
  ZorichBlock b = e.block(true);
  RatVec lam = lengths_from(e.len, den);
  return {IET(e.perm, normalize_sum(lam)), std::move(b)};
}

const OrbitLevel& OrbitRecord::level(std::size_t n) const {
  if (n > blocks_.size()) throw DomainError("orbit level beyond the computed blocks");
  if (all_levels_) return levels_[n];
  if (n == 0) return levels_.front();
  if (n == blocks_.size()) return levels_.back();
  throw DomainError("intermediate orbit levels were not recorded");
}

RatVec OrbitRecord::lengths(std::size_t n) const { return lengths_from(level(n).length_num, den_); }

RatVec OrbitRecord::lambda(std::size_t n) const {
  const auto& num = level(n).length_num;
  const BigInt total = sum(num);
  return lengths_from(num, total);
}

Rational OrbitRecord::interval_length(std::size_t n) const {
  Rational q(sum(level(n).length_num), den_);
  q.canonicalize();
  return q;
}

OrbitRecord orbit(const IET& t, std::size_t n_blocks, const OrbitOptions& opt) {
  OrbitRecord rec;
  rec.lambda0_ = t.lambda();
  rec.den_ = common_denominator(t.lambda());
  rec.all_levels_ = opt.record_levels;
  Engine e = make_engine(t, rec.den_, opt.record_matrices);
  e.max_steps = opt.max_rv_steps;
  auto snapshot = [&] {
    return OrbitLevel{e.perm, e.len, e.heights, opt.record_matrices ? e.cumulative : IntMatrix(), e.steps};
  };
  rec.levels_.push_back(snapshot());
  for (std::size_t n = 0; n < n_blocks; ++n) {
    try {
      rec.blocks_.push_back(e.block(opt.record_matrices));
    } catch (const NotRenormalizable& err) {
      if (!opt.stop_on_tie) throw;
      rec.tie_step_ = static_cast<std::uint64_t>(err.step());
      break;
    }
    std::size_t bits = 0;
    for (const auto& h : e.heights) bits = std::max(bits, mpz_sizeinbase(h.get_mpz_t(), 2));
    if (bits > opt.max_bits) {
      throw ResourceGuard("height entries exceed " + std::to_string(opt.max_bits) + " bits at block " +
                          std::to_string(n + 1));
    }
    if (opt.record_levels || rec.levels_.size() == 1) {
      rec.levels_.push_back(snapshot());
    } else {
      rec.levels_.back() = snapshot();
    }
  }
  return rec;
}

RotationPath rotation_path(const OrbitRecord& rec) {
  RotationPath p;
  for (const auto& b : rec.blocks()) p.push_back({b.perm_before, b.type, b.z});
  return p;
}

RotationPath rotation_path(const IET& t, std::size_t n_blocks) {
  OrbitOptions opt;
  opt.record_matrices = false;
  opt.record_levels = false;
  return rotation_path(orbit(t, n_blocks, opt));
}

RunCycle run_cycle(const Perm& p, MoveType t) {
  const RVStep first = step_for(p, t);
  const auto& row = t == MoveType::top ? p.bottom() : p.top();
  const std::size_t pw = t == MoveType::top ? p.pos_bottom(first.winner) : p.pos_top(first.winner);
  RunCycle out{first.winner, {}};
  for (std::size_t i = row.size(); i > pw + 1; --i) out.losers.push_back(row[i - 1]);
  return out;
}

std::vector<PathArc> expand_path(const RotationPath& path, std::size_t max_arcs) {
  std::vector<PathArc> arcs;
  for (const auto& run : path) {
    Perm p = run.perm;
    for (std::uint64_t i = 0; i < run.z && arcs.size() < max_arcs; ++i) {
      const RVStep s = step_for(p, run.type);
      arcs.push_back({p, run.type, s.winner, s.loser});
      p = successor(p, run.type);
    }
    if (arcs.size() >= max_arcs) break;
  }
  return arcs;
}

IntMatrix path_matrix(const RotationPath& path) {
  if (path.empty()) throw DomainError("empty path has no dimension");
  const std::size_t d = path.front().perm.d();
  IntMatrix m = IntMatrix::identity(d);
  for (const auto& run : path) {
    Perm p = run.perm;
    // a full cycle of losers returns the permutation to itself
    const RVStep first = step_for(p, run.type);
    const auto& row = run.type == MoveType::top ? p.bottom() : p.top();
    const std::size_t pw = run.type == MoveType::top ? p.pos_bottom(first.winner) : p.pos_top(first.winner);
    const std::uint64_t k = row.size() - pw - 1;
    const std::uint64_t cycles = run.z / k, rest = run.z % k;
    if (cycles > 0) {
      for (std::size_t i = pw + 1; i < row.size(); ++i) {
        for (std::size_t r = 0; r < d; ++r) m(r, row[i]) += BigInt(cycles) * m(r, first.winner);
      }
    }
    for (std::uint64_t i = 0; i < rest; ++i) {
      const RVStep s = step_for(p, run.type);
      m.add_column(s.loser, s.winner);
      p = successor(p, run.type);
    }
  }
  return m;
}

bool is_infinity_complete(const RotationPath& path, std::size_t window) {
  if (path.empty()) return false;
  const std::size_t d = path.front().perm.d();
  std::vector<bool> won(d, false);
  std::size_t seen = 0;
  for (const auto& run : path) {
    if (seen >= window) break;
    const RVStep s = step_for(run.perm, run.type);
    won[s.winner] = true;  // the winner is fixed through a run
    seen += run.z;
  }
  return std::all_of(won.begin(), won.end(), [](bool b) { return b; });
}

void write_orbit_csv(std::ostream& os, const OrbitRecord& rec) {
  const Perm& p0 = rec.start_perm();
  os << "n,z,type,winner,loser,perm";
  for (const auto& s : p0.alphabet()) os << ",lambda_" << s;
  for (const auto& s : p0.alphabet()) os << ",h_" << s;
  os << ",tiling,log10_max_h\n";
  for (std::size_t n = 0; n <= rec.size(); ++n) {
    const OrbitLevel& lv = rec.level(n);
    if (n == 0) {
      os << "0,0,,,," << lv.perm.key();
    } else {
      const auto& b = rec.blocks()[n - 1];
      os << n << ',' << b.z << ',' << to_string(b.type) << ',' << p0.symbol(b.winner) << ','
         << p0.symbol(b.last_loser) << ',' << lv.perm.key();
    }
    const RatVec lam = rec.lambda(n);
    for (const auto& x : lam) os << ',' << format_rational(x);
    for (const auto& h : lv.heights) os << ',' << h.get_str();
    const RatVec ell = rec.lengths(n);
    Rational tiling = 0;
    BigInt hmax = 0;
    for (std::size_t a = 0; a < ell.size(); ++a) {
      tiling += ell[a] * Rational(lv.heights[a]);
      if (lv.heights[a] > hmax) hmax = lv.heights[a];
    }
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, hmax.get_mpz_t());
    const double log10h = std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", log10h);
    os << ',' << format_rational(tiling) << ',' << buf << '\n';
  }
}

}  // namespace rauzy
