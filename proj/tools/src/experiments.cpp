#include "rauzy_cli/experiments.hpp"

#include <algorithm>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy/spectral.hpp"

namespace rauzy::cli {

namespace {

// second stream family per seed, kept apart from the λ streams
constexpr std::uint64_t kDirectionStreams = std::uint64_t(1) << 40;

RatVec sup_normalized(RatVec v) {
  Rational m = 0;
  for (const auto& x : v) m = std::max(m, Rational(abs(x)));
  if (sgn(m) == 0) return v;
  for (auto& x : v) x /= m;
  return v;
}

}  // namespace

IET sample_iet(const Perm& p, std::uint64_t seed, std::uint64_t index, std::size_t lambda_bits) {
  auto rng = make_stream(seed, index);
  return build_iet(random_simplex_point(rng, p.d(), lambda_bits), p);
}

SlopeDirection parse_direction(const std::string& id) {
  if (id == "zero") return SlopeDirection::zero;
  if (id == "cs") return SlopeDirection::central_not_stable;
  if (id == "s") return SlopeDirection::stable;
  throw DomainError("omega must be zero, cs or s");
}

RatVec sample_direction(const IET& t, SlopeDirection kind, std::mt19937_64& rng) {
  const std::size_t d = t.d();
  if (kind == SlopeDirection::zero) return RatVec(d, Rational(0));
  const StableSpaces sp = rotation_stable_spaces(t);
  std::uniform_int_distribution<long> coef(-65536, 65536);
  if (kind == SlopeDirection::stable) {
    RatVec w = sp.stable.basis.front();
    if (coef(rng) < 0) {
      for (auto& x : w) x = -x;
    }
    return sup_normalized(std::move(w));
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    RatVec w(d, Rational(0));
    for (const auto& b : sp.central_stable.basis) {
      const Rational c(coef(rng), 65536);
      for (std::size_t a = 0; a < d; ++a) w[a] += c * b[a];
    }
    if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return sgn(x) == 0; })) continue;
    if (sp.stable.contains(w)) continue;
    return sup_normalized(std::move(w));
  }
  throw DomainError("could not draw a central direction off the stable line");
}

std::size_t affine_bits_for(const IET& t, std::size_t n_blocks, const RatVec& omega, std::size_t margin) {
  OrbitOptions oo;
  oo.record_matrices = false;
  const OrbitRecord rec = orbit(t, n_blocks + 1, oo);
  std::size_t bits = 0;
  for (const auto& h : rec.level(n_blocks).heights) bits = std::max(bits, mpz_sizeinbase(h.get_mpz_t(), 2));
  const std::size_t path_bits = path_precision(rotation_path(rec), omega, rec.lambda(rec.size()));
  return std::max(bits + margin, path_bits);
}

bool HitCheck::criterion_ok() const {
  if (!criterion || criterion->entries.empty()) return false;
  for (const auto& e : criterion->entries) {
    if (e.level != n) continue;
    const bool tiling = (e.cond1 == Verdict::pass || e.cond1 == Verdict::structural) &&
                        (e.cond2 == Verdict::pass || e.cond2 == Verdict::structural);
    if (!tiling) return false;
    if (e.designated && !(e.cond3 == Verdict::pass && e.cond4 == Verdict::pass && e.cond5 == Verdict::pass)) {
      return false;
    }
  }
  return true;
}

ScanSample run_scan_sample(const Perm& p, std::uint64_t seed, std::uint64_t index, const ScanSampleOptions& opt) {
  ScanSample s;
  s.index = index;
  const IET t = sample_iet(p, seed, index, opt.lambda_bits);
  s.scan = generic_condition_scan(t, opt.c0, opt.schedule, opt.n_blocks);
  if (!s.scan.warnings.empty() && s.scan.blocks < opt.n_blocks) s.status = "tie";
  if (!opt.check_hits || s.scan.hits.empty()) return s;

  auto rng = make_stream(seed, kDirectionStreams + index);
  const RatVec omega = sample_direction(t, SlopeDirection::central_not_stable, rng);
  std::vector<std::size_t> hits = s.scan.hits;
  if (opt.max_checked_hits && hits.size() > opt.max_checked_hits) hits.resize(opt.max_checked_hits);
  OrbitOptions oo;
  oo.record_matrices = false;
  const OrbitRecord rec = orbit(t, hits.back() + 1, oo);
  for (std::size_t n : hits) {
    HitCheck h;
    h.n = n;
    h.target = BigInt(static_cast<unsigned long>(n)) * opt.schedule.value(n) - 2;
    const AdjacencyStructure adj = adjacency_structure(rec, n);
    h.adjacency_certified = adj.certified;
    h.adjacency_counts_ok = true;
    for (Letter a = 0; a < p.d(); ++a) {
      h.counts.push_back(adj.count(a));
      if (a != adj.last_bottom && BigInt(static_cast<unsigned long>(adj.count(a))) < h.target) {
        h.adjacency_counts_ok = false;
      }
    }
    try {
      const std::size_t bits = affine_bits_for(t, n + 1, omega);
      const AIET f = aiet_over_iet(t, n + 1, omega, bits);
      CriterionOptions co;
      co.conjugate_lengths = t.lambda();
      const Schedule sched = opt.schedule;
      co.rigidity_target = [sched](std::size_t m) -> BigInt {
        return BigInt(static_cast<unsigned long>(m)) * sched.value(m) - 2;
      };
      h.criterion = check_criterion(f, {n}, co);
    } catch (const std::exception& e) {
      h.error = e.what();
    }
    s.checks.push_back(std::move(h));
  }
  return s;
}

Json to_json(const HitCheck& h) {
  Json j{{"n", h.n},
         {"target", h.target.get_str()},
         {"adjacency_certified", h.adjacency_certified},
         {"adjacency_counts_ok", h.adjacency_counts_ok},
         {"counts", h.counts},
         {"criterion_ok", h.criterion_ok()}};
  if (h.criterion) j["criterion"] = rauzy::to_json(*h.criterion);
  if (!h.error.empty()) j["error"] = h.error;
  return j;
}

Json to_json(const ScanSample& s) {
  Json checks = Json::array();
  for (const auto& h : s.checks) checks.push_back(to_json(h));
  return Json{{"index", s.index}, {"status", s.status}, {"scan", rauzy::to_json(s.scan)}, {"checks", std::move(checks)}};
}

}  // namespace rauzy::cli
