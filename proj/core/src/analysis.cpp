#include "rauzy/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy/spectral.hpp"

namespace rauzy {

namespace {

std::string interval_text(const Rational& l, const Rational& r) {
  return "[" + format_rational(l) + ", " + format_rational(r) + ")";
}
std::string interval_text(const BigReal& l, const BigReal& r) {
  return "[" + l.to_string(20) + ", " + r.to_string(20) + ")";
}

BigReal tolerance_for(BigReal::Precision bits) { return BigReal::pow2(-(static_cast<long>(bits) - 40), bits); }

bool below(const Rational& a, const Rational& b) { return a < b; }
bool below(const BigReal& a, const BigReal& b) { return a < b - tolerance_for(a.precision()); }

template <class Num>
std::optional<OverlapWitness> overlap_in(const std::vector<BasicRohlinTower<Num>>& towers) {
  struct Ref {
    const BasicInterval<Num>* iv;
    std::size_t tower, floor;
  };
  std::vector<Ref> all;
  for (std::size_t t = 0; t < towers.size(); ++t) {
    for (std::size_t k = 0; k < towers[t].floors.size(); ++k) all.push_back({&towers[t].floors[k], t, k});
  }
  std::sort(all.begin(), all.end(), [](const Ref& a, const Ref& b) { return a.iv->left < b.iv->left; });
  // floor with the furthest right end so far
  std::size_t reach = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const Ref& cur = all[i];
    const Ref& far = all[reach];
    if (below(cur.iv->left, far.iv->right)) {
      const Num right = std::min(cur.iv->right, far.iv->right);
      return OverlapWitness{far.tower, far.floor, cur.tower, cur.floor, interval_text(cur.iv->left, right)};
    }
    if (all[i].iv->right > far.iv->right) reach = i;
  }
  return std::nullopt;
}

/// Pushes an IET interval forward while it stays inside one branch.
bool push_floor(const IET& t, const Interval& j, Interval& out) {
  const Letter a = t.letter_at(j.left);
  if (j.right > t.domain(a).right) return false;
  out = {j.left + t.translation()[a], j.right + t.translation()[a]};
  return true;
}

bool push_floor(const AIET& f, const RealInterval& j, RealInterval& out) {
  // the midpoint, since rounding may push an end just across a break
  const Letter a = f.letter_at((j.left + j.right) * BigReal::pow2(-1, f.precision()));
  const RealInterval dom = f.domain(a);
  const BigReal tol = tolerance_for(f.precision());
  if (j.right > dom.right + tol || j.left < dom.left - tol) return false;
  const BigReal img = f.image(a).left;
  out = {img + f.slopes()[a] * (j.left - dom.left), img + f.slopes()[a] * (j.right - dom.left)};
  return true;
}

template <class Map, class Num>
bool build_floors(const Map& f, BasicRohlinTower<Num>& tower) {
  tower.floors.clear();
  tower.floors.push_back(tower.base);
  const std::uint64_t h = tower.height.get_ui();
  for (std::uint64_t k = 1; k < h; ++k) {
    BasicInterval<Num> next;
    if (!push_floor(f, tower.floors.back(), next)) return false;
    tower.floors.push_back(std::move(next));
  }
  return true;
}

BigInt total_height(const IntVec& h) { return sum(h); }

IntVec column_sums(const IntMatrix& b) {
  IntVec h(b.size(), BigInt(0));
  for (std::size_t r = 0; r < b.size(); ++r) {
    for (std::size_t c = 0; c < b.size(); ++c) h[c] += b(r, c);
  }
  return h;
}

bool rotation_shape(const Perm& p) { return monodromy(p) == monodromy(canonical_rotation_perm(p.d())); }

/// Affine towers over I_α^(n) from orbit data.
struct AffineBuild {
  std::vector<AffineRohlinTower> towers;
  bool continuous = true;
};

AffineBuild affine_towers(const AIET& f, const AietLevel& lv, const IntVec& heights, std::size_t n) {
  AffineBuild out;
  const BigReal scale = exp(lv.log_scale);
  BigReal acc(0, f.precision());
  std::vector<BigReal> left(f.d());
  for (Letter a : lv.perm.top()) {
    left[a] = acc;
    acc += lv.lengths[a];
  }
  for (Letter a = 0; a < f.d(); ++a) {
    AffineRohlinTower t;
    t.base = {scale * left[a], scale * (left[a] + lv.lengths[a])};
    t.height = heights[a];
    t.letter = a;
    t.level = n;
    if (!build_floors(f, t)) out.continuous = false;
    out.towers.push_back(std::move(t));
  }
  return out;
}

AIET level_map(const AietLevel& lv, BigReal::Precision bits) {
  RealVec slopes;
  for (const auto& w : lv.log_slope) slopes.push_back(exp(w));
  return AIET::trusted(lv.perm, lv.lengths, lv.log_slope, slopes, bits);
}

}  // namespace

TowerSystem towers_at_level(const IET& t, std::size_t n_blocks, const TowerOptions& opt) {
  OrbitOptions oo;
  oo.record_matrices = false;
  const OrbitRecord rec = orbit(t, n_blocks, oo);
  const OrbitLevel& lv = rec.level(n_blocks);
  if (total_height(lv.heights) > opt.max_floors) {
    throw ResourceGuard("towers at level " + std::to_string(n_blocks) + " have " +
                        total_height(lv.heights).get_str() + " floors, above the cap");
  }
  const RatVec len = rec.lengths(n_blocks);
  TowerSystem sys;
  sys.level = n_blocks;
  Rational acc = 0;
  std::vector<Rational> left(t.d());
  for (Letter a : lv.perm.top()) {
    left[a] = acc;
    acc += len[a];
  }
  for (Letter a = 0; a < t.d(); ++a) {
    RohlinTower tw;
    tw.base = {left[a], left[a] + len[a]};
    tw.height = lv.heights[a];
    tw.letter = a;
    tw.level = n_blocks;
    if (!build_floors(t, tw)) {
      throw NotRenormalizable("a floor of the tower over letter " + lv.perm.symbol(a) + " straddles a discontinuity",
                              static_cast<std::int64_t>(n_blocks));
    }
    sys.towers.push_back(std::move(tw));
  }
  sys.overlap = overlap_in(sys.towers);
  sys.disjoint = !sys.overlap;
  sys.covered = 0;
  for (const auto& tw : sys.towers) {
    for (const auto& fl : tw.floors) sys.covered += fl.length();
  }
  return sys;
}

AffineTowerSystem towers_at_level(const AIET& f, std::size_t n_blocks, const TowerOptions& opt) {
  AietOrbitOptions ao;
  ao.keep_cumulative = true;
  const AietOrbit orb = aiet_orbit(f, n_blocks, ao);
  if (orb.blocks() < n_blocks) {
    throw NotRenormalizable(std::string("affine induction stopped early: ") + to_string(orb.status),
                            static_cast<std::int64_t>(orb.blocks()));
  }
  const IntVec h = column_sums(orb.cumulative[n_blocks]);
  if (total_height(h) > opt.max_floors) {
    throw ResourceGuard("towers at level " + std::to_string(n_blocks) + " have " + total_height(h).get_str() +
                        " floors, above the cap");
  }
  AffineBuild b = affine_towers(f, orb.levels[n_blocks], h, n_blocks);
  if (!b.continuous) {
    throw NotRenormalizable("a tower floor straddles a discontinuity", static_cast<std::int64_t>(n_blocks));
  }
  AffineTowerSystem sys;
  sys.level = n_blocks;
  sys.towers = std::move(b.towers);
  sys.overlap = overlap_in(sys.towers);
  sys.disjoint = !sys.overlap;
  sys.covered = BigReal(0, f.precision());
  for (const auto& tw : sys.towers) {
    for (const auto& fl : tw.floors) sys.covered += fl.length();
  }
  return sys;
}

RohlinTower tower_over(const IET& t, const Interval& base, std::uint64_t height) {
  if (!(base.left < base.right) || sgn(base.left) < 0 || base.right > 1) throw DomainError("tower base must lie in [0,1)");
  RohlinTower tw;
  tw.base = base;
  tw.height = BigInt(static_cast<unsigned long>(height));
  tw.floors.push_back(base);
  for (std::uint64_t k = 1; k < height; ++k) {
    Interval next;
    if (!push_floor(t, tw.floors.back(), next)) break;
    tw.floors.push_back(next);
  }
  return tw;
}

std::optional<OverlapWitness> find_overlap(const std::vector<RohlinTower>& towers) { return overlap_in(towers); }

std::optional<Letter> tower_containing(const IET& t, const OrbitRecord& rec, std::size_t n, const Rational& x,
                                       std::uint64_t max_steps) {
  const Rational top = rec.interval_length(n);
  const RatVec len = rec.lengths(n);
  Rational y = x;
  for (std::uint64_t k = 0; y >= top; ++k) {
    if (k >= max_steps) return std::nullopt;
    y = evaluate_inverse(t, y);
  }
  Rational acc = 0;
  for (Letter a : rec.level(n).perm.top()) {
    acc += len[a];
    if (y < acc) return a;
  }
  return std::nullopt;
}

std::vector<double> tower_frequencies(const IET& t, std::size_t n, std::size_t samples, std::uint64_t seed) {
  OrbitOptions oo;
  oo.record_matrices = false;
  const OrbitRecord rec = orbit(t, n, oo);
  BigInt hmax = 0;
  for (const auto& h : rec.level(n).heights) hmax = std::max(hmax, h);
  if (!hmax.fits_ulong_p()) throw ResourceGuard("tower heights too large to walk orbits");
  auto rng = make_stream(seed, 0);
  std::vector<double> freq(t.d(), 0.0);
  const BigInt denom = BigInt(1) << 64;
  for (std::size_t s = 0; s < samples; ++s) {
    Rational x(random_bits(rng, 64), denom);
    x.canonicalize();
    const auto a = tower_containing(t, rec, n, x, hmax.get_ui() + 1);
    if (!a) throw ResourceGuard("orbit did not reach the base within the largest height");
    freq[*a] += 1.0;
  }
  for (auto& f : freq) f /= static_cast<double>(samples);
  return freq;
}

BigReal s_content(const RealVec& lengths, double s) {
  if (!(s > 0) || !(s <= 1)) throw DomainError("s-content needs 0 < s <= 1");
  const BigReal::Precision bits = lengths.empty() ? BigReal::default_precision() : lengths.front().precision();
  const BigReal ss(s, bits);
  BigReal total(0, bits);
  for (const auto& x : lengths) {
    if (x.sign() > 0) total += exp(ss * log(x));
  }
  return total;
}

BigReal s_content(const std::vector<RohlinTower>& towers, double s, BigReal::Precision bits) {
  RealVec len;
  for (const auto& t : towers) {
    for (const auto& f : t.floors) len.emplace_back(f.length(), bits);
  }
  if (len.empty()) return BigReal(0, bits);
  return s_content(len, s);
}

BigReal s_content(const std::vector<AffineRohlinTower>& towers, double s) {
  RealVec len;
  for (const auto& t : towers) {
    for (const auto& f : t.floors) len.push_back(f.length());
  }
  if (len.empty()) return BigReal(0);
  return s_content(len, s);
}

RealVec geometric_thinning(const BigReal& first_gap, std::size_t L, std::size_t M, const BigReal& sigma) {
  if (L > M) throw DomainError("thinning needs L <= M");
  RealVec out;
  BigReal x = first_gap;
  for (std::size_t i = 0; i < M; ++i) {
    if (i >= L) out.push_back(x);
    x *= sigma;
  }
  return out;
}

RealVec thinned_base(const AIET& g, Letter letter, std::size_t L, std::size_t M) {
  if (L > M) throw DomainError("thinning needs L <= M");
  const RealInterval dom = g.domain(letter);
  const BigReal a = g.image(letter).left, s = g.slopes()[letter];
  auto phi = [&](const BigReal& x) { return a + s * (x - dom.left); };
  RealInterval piece;
  const BigReal pl = phi(dom.left), pr = phi(dom.right);
  if (dom.left < pl && pl < dom.right) {
    piece = {dom.left, pl};
  } else if (dom.left < pr && pr < dom.right) {
    piece = {pr, dom.right};
  } else {
    return {};
  }
  RealVec out;
  for (std::size_t i = 0; i < M; ++i) {
    if (!dom.contains(piece.left) || piece.right > dom.right) break;
    if (i >= L) out.push_back(piece.length());
    piece = {phi(piece.left), phi(piece.right)};
  }
  return out;
}

Schedule builtin_schedule(const std::string& id) {
  if (id == "log2") {
    // ⌈log₂ m⌉ is the bit length of m - 1
    return {id, [](std::size_t n) { return BigInt(static_cast<unsigned long>(std::bit_width(n + 1))); }, true};
  }
  if (id == "const") return {id, [](std::size_t) { return BigInt(1); }, true};
  if (id == "linear") {
    return {id, [](std::size_t n) { return BigInt(static_cast<unsigned long>(std::max<std::size_t>(n, 1))); }, false};
  }
  throw DomainError("unknown schedule '" + id + "' (log2, const, linear)");
}

Schedule custom_schedule(std::string id, std::function<BigInt(std::size_t)> value) {
  return {std::move(id), std::move(value), std::nullopt};
}

GenericConditionReport generic_condition_scan(const IET& t, const Rational& c0, const Schedule& schedule,
                                              std::size_t max_blocks) {
  const std::size_t d = t.d();
  if (!(sgn(c0) > 0) || !(c0 < Rational(1, 10 * d))) {
    throw DomainError("c0 must satisfy 0 < c0 < 1/(10d)");
  }
  if (!is_rotation_type(t.perm())) throw DomainError("generic-condition scan needs a rotation-type perm");
  OrbitOptions oo;
  oo.record_matrices = false;
  oo.stop_on_tie = true;
  const OrbitRecord rec = orbit(t, max_blocks, oo);
  GenericConditionReport rep;
  rep.c0 = c0;
  rep.schedule = schedule.id;
  rep.schedule_diverges = schedule.diverges;
  rep.blocks = rec.size();
  if (rec.tie_step()) {
    rep.warnings.push_back("orbit ended at a tie after " + std::to_string(rec.size()) + " blocks");
  }
  const auto target_shape = monodromy(canonical_rotation_perm(d));
  for (std::size_t n = 1; n <= rec.size(); ++n) {
    const OrbitLevel& lv = rec.level(n);
    if (monodromy(lv.perm) != target_shape) continue;
    ScanVisit v;
    v.n = n;
    v.perm = lv.perm;
    v.last_bottom = lv.perm.last_bottom();
    v.target = BigInt(static_cast<unsigned long>(n)) * schedule.value(n);
    const RatVec lam = rec.lambda(n);
    bool first = true;
    for (Letter a = 0; a < d; ++a) {
      if (a == v.last_bottom) continue;
      const Rational r = lam[a] / lam[v.last_bottom];
      if (first || r < v.min_ratio) v.min_ratio = r;
      if (first || lam[a] < v.min_length) v.min_length = lam[a];
      first = false;
    }
    const auto [hmin, hmax] = std::minmax_element(lv.heights.begin(), lv.heights.end());
    v.height_balance = Rational(*hmin, *hmax);
    v.height_balance.canonicalize();
    v.lengths_ok = v.min_ratio > Rational(v.target);
    v.balanced_ok = v.min_length > c0;
    v.heights_ok = v.height_balance > c0;
    if (v.hit()) rep.hits.push_back(n);
    rep.visits.push_back(std::move(v));
  }
  if (rep.visits.empty()) rep.warnings.push_back("canonical rotation shape never visited");
  if (!schedule.diverges) rep.warnings.push_back("divergence of the schedule sum is unchecked");
  else if (!*schedule.diverges) rep.warnings.push_back("schedule sum converges");
  return rep;
}

std::uint64_t AdjacencyStructure::count(Letter a) const {
  std::uint64_t c = 0;
  for (const auto& r : runs) {
    if (r.letter == a) c += r.count;
  }
  return c;
}

AdjacencyStructure adjacency_structure(const OrbitRecord& rec, std::size_t n) {
  const Perm& p = rec.level(n).perm;
  if (!rotation_shape(p)) throw DomainError("adjacency structure needs the canonical rotation shape at level n");
  const IET t = build_iet(rec.lambda(n), p);
  AdjacencyStructure out;
  out.n = n;
  out.last_bottom = p.last_bottom();
  out.markers.push_back(0);
  const Interval home = t.domain(out.last_bottom);
  Interval j = t.image(out.last_bottom);
  std::uint64_t i = 1;
  out.certified = true;
  const std::size_t max_runs = 8 * t.d() + 8;
  for (std::size_t guard = 0; guard < max_runs; ++guard) {
    if (j.overlaps(home)) break;
    const Letter a = t.letter_at(j.left);
    const Interval dom = t.domain(a);
    if (j.right <= dom.right) {
      // a translation inside one branch: count the translates that fit
      const Rational& w = t.translation()[a];
      BigInt k;
      if (sgn(w) < 0) {
        const Rational q = (j.left - dom.left) / (-w);
        k = q.get_num() / q.get_den() + 1;
      } else {
        const Rational q = (dom.right - j.right) / w;
        k = q.get_num() / q.get_den() + 1;
      }
      if (!k.fits_ulong_p()) throw ResourceGuard("adjacency run too long");
      const bool adjacent = abs(w) == j.length();
      out.certified = out.certified && adjacent;
      out.runs.push_back({a, i, k.get_ui(), adjacent});
      const Rational shift = Rational(k) * w;
      j = {j.left + shift, j.right + shift};
      i += k.get_ui();
      continue;
    }
    // straddles a boundary: push the pieces and require them to stay together
    out.markers.push_back(i);
    Rational cut = dom.right, lo = j.left;
    Interval img{lo + t.translation()[a], cut + t.translation()[a]};
    bool joined = true;
    while (cut < j.right) {
      const Letter b = t.letter_at(cut);
      const Rational hi = std::min(j.right, t.domain(b).right);
      if (cut + t.translation()[b] != img.right) joined = false;
      img.right = hi + t.translation()[b];
      cut = hi;
    }
    if (!joined) {
      out.certified = false;
      break;
    }
    j = img;
    ++i;
  }
  out.total_iterates = i - 1;
  return out;
}

AdjacencyStructure adjacency_structure(const IET& t, std::size_t n) {
  OrbitOptions oo;
  oo.record_matrices = false;
  return adjacency_structure(orbit(t, n, oo), n);
}

HatAMembership hat_A_membership(const RatVec& lambda, std::size_t n, const Rational& c0, const Schedule& C,
                                const Perm& canonical) {
  if (lambda.size() != canonical.d()) throw DomainError("length vector size differs from alphabet size");
  for (const auto& x : lambda) {
    if (sgn(x) <= 0) throw DomainError("lengths must be positive");
  }
  if (sum(lambda) != 1) throw DomainError("lengths must sum to 1");
  if (n < 1) throw DomainError("level must be at least 1");
  const Perm pred = canonical_bottom_predecessor(canonical);
  const Letter beta = canonical.last_bottom(), delta = pred.last_top();
  const Rational diff = lambda[beta] - lambda[delta];
  Rational cap(1, BigInt(static_cast<unsigned long>(n)) * C.value(n));
  cap.canonicalize();
  cap = std::min(cap, c0);
  HatAMembership m;
  m.bottom_type = sgn(diff) > 0;
  m.member = m.bottom_type && diff < cap && *std::min_element(lambda.begin(), lambda.end()) > c0;
  return m;
}

std::optional<double> measure_lengths_constant(const Perm& canonical, std::size_t n, const Rational& c0,
                                               const Schedule& C, std::size_t samples, std::uint64_t seed) {
  const Perm pred = canonical_bottom_predecessor(canonical);
  const Letter beta = canonical.last_bottom();
  const BigInt nc = BigInt(static_cast<unsigned long>(n)) * C.value(n);
  auto rng = make_stream(seed, 0);
  std::optional<Rational> best;
  for (std::size_t s = 0; s < samples; ++s) {
    const RatVec lam = random_simplex_point(rng, canonical.d(), 64);
    if (!hat_A_membership(lam, n, c0, C, canonical).member) continue;
    const auto [next, step] = rv_step(build_iet(lam, pred));
    if (!(next.perm() == canonical) || step.type != MoveType::bottom) {
      throw std::logic_error("member did not renormalize onto the canonical perm");
    }
    const RatVec& l2 = next.lambda();
    for (Letter a = 0; a < canonical.d(); ++a) {
      if (a == beta) continue;
      const Rational r = l2[a] / (Rational(nc) * l2[beta]);
      if (!best || r < *best) best = r;
    }
  }
  if (!best) return std::nullopt;
  return best->get_d();
}

GammaPath find_gamma_path(const Perm& canonical, std::size_t max_states) {
  const std::size_t d = canonical.d();
  if (d > 8) throw DomainError("gamma path search supports d <= 8");
  const RauzyClass cls = rauzy_class(canonical);
  const Perm goal = canonical_bottom_predecessor(canonical);
  const std::size_t goal_idx = cls.index_of(goal).value();
  using Pattern = std::uint64_t;
  const Pattern full = d * d == 64 ? ~Pattern(0) : (Pattern(1) << (d * d)) - 1;
  auto bit = [d](std::size_t r, std::size_t c) { return Pattern(1) << (r * d + c); };
  // right multiplication by I + E_{w,l}: column l gains column w
  auto apply = [&](Pattern p, Letter w, Letter l) {
    for (std::size_t r = 0; r < d; ++r) {
      if (p & bit(r, w)) p |= bit(r, l);
    }
    return p;
  };
  Pattern ident = 0;
  for (std::size_t i = 0; i < d; ++i) ident |= bit(i, i);

  struct Node {
    std::size_t perm;
    Pattern pattern;
    std::size_t parent;  // index into nodes, or npos for roots
    MoveType move;
    std::size_t root;    // start perm of the path
  };
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  auto key = [](std::size_t perm, Pattern p) { return std::to_string(perm) + ":" + std::to_string(p); };
  auto step_letters = [](const Perm& p, MoveType t) {
    return t == MoveType::top ? std::pair{p.last_top(), p.last_bottom()} : std::pair{p.last_bottom(), p.last_top()};
  };
  std::deque<std::size_t> queue;
  std::optional<std::size_t> found;
  for (std::size_t s = 0; s < cls.perms.size() && !found; ++s) {
    const Perm& p = cls.perms[s];
    const auto [w, l] = step_letters(p, MoveType::top);
    const std::size_t to = cls.index_of(successor(p, MoveType::top)).value();
    const Pattern pat = apply(ident, w, l);
    if (!seen.emplace(key(to, pat), nodes.size()).second) continue;
    nodes.push_back({to, pat, npos, MoveType::top, s});
    queue.push_back(nodes.size() - 1);
  }
  while (!queue.empty() && !found) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (MoveType mv : {MoveType::top, MoveType::bottom}) {
      const Node node = nodes[cur];
      const Perm& p = cls.perms[node.perm];
      const auto [w, l] = step_letters(p, mv);
      const std::size_t to = cls.index_of(successor(p, mv)).value();
      const Pattern pat = apply(node.pattern, w, l);
      // the goal is tested before deduplication: the same state reached by a top move does not count
      if (mv == MoveType::bottom && to == goal_idx && pat == full) {
        nodes.push_back({to, pat, cur, mv, node.root});
        found = nodes.size() - 1;
        break;
      }
      if (!seen.emplace(key(to, pat), nodes.size()).second) continue;
      nodes.push_back({to, pat, cur, mv, node.root});
      if (nodes.size() > max_states) throw ResourceGuard("gamma path search exceeded the state cap");
      queue.push_back(nodes.size() - 1);
    }
  }
  if (!found) throw DomainError("no path with a positive matrix reaches the predecessor");
  std::vector<MoveType> moves;
  for (std::size_t i = *found; i != npos; i = nodes[i].parent) moves.push_back(nodes[i].move);
  std::reverse(moves.begin(), moves.end());
  GammaPath g;
  g.start = cls.perms[nodes[*found].root];
  g.perms.push_back(g.start);
  g.matrix = IntMatrix::identity(d);
  for (MoveType mv : moves) {
    const Perm& p = g.perms.back();
    const auto [w, l] = step_letters(p, mv);
    g.matrix = g.matrix * RVStep{mv, w, l}.matrix(d);
    g.perms.push_back(successor(p, mv));
  }
  g.moves = std::move(moves);
  return g;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::structural:
      return "structural";
    case Verdict::skipped:
      return "skipped";
  }
  return "?";
}

RigidityCount rigidity_count(const IET& g, Letter letter, std::uint64_t cap) {
  const Interval dom = g.domain(letter);
  const Rational w = abs(g.translation()[letter]);
  // (F + k w) ∩ ... ∩ F is nonempty exactly while k |w| < |F|
  const Rational q = dom.length() / w;
  BigInt m = q.get_num() / q.get_den();
  if (q.get_den() == 1) m -= 1;
  RigidityCount rc;
  if (m >= BigInt(static_cast<unsigned long>(cap))) {
    rc.count = cap;
    rc.capped = true;
  } else {
    rc.count = m.get_ui();
  }
  return rc;
}

RigidityCount rigidity_count(const AIET& g, Letter letter, std::uint64_t cap) {
  const BigReal::Precision bits = g.precision();
  const RealInterval dom = g.domain(letter);
  const BigReal a = g.image(letter).left, s = g.slopes()[letter];
  const BigReal tol = tolerance_for(bits);
  std::optional<BigReal> fixed;
  const BigReal one(1, bits);
  if (abs(s - one) > tol) fixed = (a - s * dom.left) / (one - s);
  BigReal lo = dom.left, hi = dom.right;
  RigidityCount rc;
  while (rc.count < cap) {
    if (fixed && *fixed > lo + tol && *fixed < hi - tol) {
      // a fixed point of the branch stays in every intersection
      rc.count = cap;
      rc.capped = true;
      return rc;
    }
    // image of [lo, hi) rounded inwards, then cut back to the base
    BigReal nlo = BigReal::add_rounded(a, BigReal::mul_rounded(s, BigReal::sub_rounded(lo, dom.left, MPFR_RNDU), MPFR_RNDU),
                                       MPFR_RNDU);
    BigReal nhi = BigReal::add_rounded(a, BigReal::mul_rounded(s, BigReal::sub_rounded(hi, dom.left, MPFR_RNDD), MPFR_RNDD),
                                       MPFR_RNDD);
    nlo = std::max(nlo, dom.left);
    nhi = std::min(nhi, dom.right);
    if (!(nlo < nhi)) return rc;
    lo = std::move(nlo);
    hi = std::move(nhi);
    ++rc.count;
  }
  rc.capped = true;
  return rc;
}

CriterionReport check_criterion(const AIET& f, const std::vector<std::size_t>& levels, const CriterionOptions& opt) {
  CriterionReport rep;
  if (levels.empty()) return rep;
  const std::size_t d = f.d();
  const std::size_t deepest = *std::max_element(levels.begin(), levels.end());
  AietOrbitOptions ao;
  ao.keep_cumulative = true;
  const AietOrbit orb = aiet_orbit(f, deepest, ao);
  rep.status = orb.status;
  rep.levels_computed = orb.blocks();

  // tower masses
  std::vector<std::vector<double>> mass;
  std::string mass_note;
  if (opt.conjugate_lengths) {
    const IET t = build_iet(*opt.conjugate_lengths, f.perm());
    OrbitOptions oo;
    oo.record_matrices = false;
    oo.stop_on_tie = true;
    const OrbitRecord rec = orbit(t, orb.blocks(), oo);
    if (rec.size() < orb.blocks()) throw DomainError("the given lengths stop renormalizing before the affine map");
    const RotationPath path = rotation_path(rec);
    for (std::size_t i = 0; i < orb.blocks(); ++i) {
      if (!(path[i] == orb.path[i])) {
        throw DomainError("the given lengths do not follow the path of the affine map (block " + std::to_string(i) + ")");
      }
    }
    for (std::size_t n = 0; n <= orb.blocks(); ++n) {
      const RatVec len = rec.lengths(n);
      std::vector<double> m;
      for (Letter a = 0; a < d; ++a) m.push_back(Rational(Rational(rec.level(n).heights[a]) * len[a]).get_d());
      mass.push_back(std::move(m));
    }
  } else {
    try {
      const MeasureWeights mw = invariant_measure_weights(f, deepest + opt.measure_lookahead, opt.measure);
      for (const auto& w : mw.tower_weight) {
        std::vector<double> m;
        for (const auto& x : w) m.push_back(x.get_d());
        mass.push_back(std::move(m));
      }
    } catch (const std::exception& e) {
      mass_note = std::string("tower masses unavailable: ") + e.what();
    }
  }

  rep.mass_lower_bound = std::numeric_limits<double>::infinity();
  rep.slope_gap_inf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t n : sorted) {
    if (n > orb.blocks()) continue;
    const AietLevel& lv = orb.levels[n];
    const IntVec h = column_sums(orb.cumulative[n]);
    const AIET g = level_map(lv, f.precision());
    const Letter beta = lv.perm.last_bottom();
    Letter designated = beta == 0 ? 1 : 0;
    for (Letter a = 0; a < d; ++a) {
      if (a != beta && abs(lv.log_slope[a]) > abs(lv.log_slope[designated])) designated = a;
    }
    // explicit floors only while they fit under the cap
    std::optional<AffineBuild> built;
    std::optional<OverlapWitness> overlap;
    if (total_height(h) <= opt.max_floors) {
      built = affine_towers(f, lv, h, n);
      overlap = overlap_in(built->towers);
    }
    for (Letter a = 0; a < d; ++a) {
      CriterionEntry e;
      e.level = n;
      e.letter = a;
      e.designated = a == designated;
      e.height = h[a];
      if (built) {
        e.cond1 = overlap ? Verdict::fail : Verdict::pass;
        if (overlap) e.overlap = overlap;
        e.cond2 = built->continuous ? Verdict::pass : Verdict::fail;
      } else {
        e.cond1 = Verdict::structural;
        e.cond2 = Verdict::structural;
      }
      if (n < mass.size()) {
        e.tower_mass = mass[n][a];
        e.cond3 = e.tower_mass >= opt.mass_floor ? Verdict::pass : Verdict::fail;
      }
      e.slope_gap = std::fabs((exp(lv.log_slope[a]) - BigReal(1, f.precision())).to_double());
      e.cond4 = e.slope_gap >= opt.slope_floor ? Verdict::pass : Verdict::fail;
      std::uint64_t cap = opt.max_rigidity;
      if (opt.rigidity_target) {
        e.rigidity_target = opt.rigidity_target(n);
        if (e.rigidity_target->fits_ulong_p() && sgn(*e.rigidity_target) >= 0) {
          cap = std::min<std::uint64_t>(cap, e.rigidity_target->get_ui());
        }
      }
      const RigidityCount rc = rigidity_count(g, a, cap);
      e.rigidity = rc.count;
      e.rigidity_capped = rc.capped;
      const double lh = log_bigint(h[a]);
      e.rigidity_ratio = lh > 0 ? static_cast<double>(rc.count) / lh : std::numeric_limits<double>::infinity();
      if (e.rigidity_target) {
        e.cond5 = BigInt(static_cast<unsigned long>(rc.count)) >= *e.rigidity_target ? Verdict::pass : Verdict::fail;
      }
      if (e.designated) {
        if (e.cond3 != Verdict::skipped) rep.mass_lower_bound = std::min(rep.mass_lower_bound, e.tower_mass);
        rep.slope_gap_inf = std::min(rep.slope_gap_inf, e.slope_gap);
        if (e.cond4 == Verdict::pass) rep.applicable = true;
      }
      rep.entries.push_back(std::move(e));
    }
  }
  if (!std::isfinite(rep.mass_lower_bound)) rep.mass_lower_bound = 0;
  if (!std::isfinite(rep.slope_gap_inf)) rep.slope_gap_inf = 0;
  std::vector<std::string> notes;
  if (!rep.applicable) notes.push_back("no designated tower has a slope gap; the criterion is inapplicable");
  if (rep.levels_computed < deepest) {
    notes.push_back(std::string("induction stopped after ") + std::to_string(rep.levels_computed) +
                    " blocks: " + to_string(rep.status));
  }
  if (!mass_note.empty()) notes.push_back(mass_note);
  for (std::size_t i = 0; i < notes.size(); ++i) rep.note += (i ? "; " : "") + notes[i];
  return rep;
}

void write_criterion_csv(std::ostream& os, const CriterionReport& rep) {
  os << "level,letter,designated,height,cond1,cond2,cond3,cond4,cond5,tower_mass,slope_gap,rigidity,"
        "rigidity_capped,rigidity_target,ratio\n";
  for (const auto& e : rep.entries) {
    os << e.level << ',' << e.letter << ',' << (e.designated ? 1 : 0) << ',' << e.height.get_str() << ','
       << to_string(e.cond1) << ',' << to_string(e.cond2) << ',' << to_string(e.cond3) << ',' << to_string(e.cond4)
       << ',' << to_string(e.cond5) << ',' << e.tower_mass << ',' << e.slope_gap << ',' << e.rigidity << ','
       << (e.rigidity_capped ? 1 : 0) << ',' << (e.rigidity_target ? e.rigidity_target->get_str() : "") << ','
       << e.rigidity_ratio << '\n';
  }
}

void write_scan_csv(std::ostream& os, const GenericConditionReport& rep) {
  os << "n,perm,target,min_ratio,min_length,height_balance,lengths_ok,balanced_ok,heights_ok,hit\n";
  for (const auto& v : rep.visits) {
    os << v.n << ",\"" << v.perm.key() << "\"," << v.target.get_str() << ',' << v.min_ratio.get_d() << ','
       << v.min_length.get_d() << ',' << v.height_balance.get_d() << ',' << v.lengths_ok << ',' << v.balanced_ok
       << ',' << v.heights_ok << ',' << v.hit() << '\n';
  }
}

}  // namespace rauzy
