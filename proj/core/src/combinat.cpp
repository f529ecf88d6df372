#include "rauzy/combinat.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "rauzy/error.hpp"

namespace rauzy {

const char* to_string(MoveType t) noexcept { return t == MoveType::top ? "top" : "bottom"; }

MoveType other(MoveType t) noexcept { return t == MoveType::top ? MoveType::bottom : MoveType::top; }

Perm::Perm(std::vector<std::string> alphabet, std::vector<Letter> top, std::vector<Letter> bottom)
    : alphabet_(std::move(alphabet)), top_(std::move(top)), bottom_(std::move(bottom)) {
  validate_and_index();
}

void Perm::validate_and_index() {
  const std::size_t d = alphabet_.size();
  if (d < 2) throw DomainError("permutation needs at least 2 letters");
  if (top_.size() != d || bottom_.size() != d) throw DomainError("row length differs from alphabet size");
  pos_top_.assign(d, d);
  pos_bottom_.assign(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (top_[i] >= d || pos_top_[top_[i]] != d) throw DomainError("top row is not a bijection");
    pos_top_[top_[i]] = i;
    if (bottom_[i] >= d || pos_bottom_[bottom_[i]] != d) throw DomainError("bottom row is not a bijection");
    pos_bottom_[bottom_[i]] = i;
  }
}

Perm Perm::from_rows(const std::vector<std::string>& top, const std::vector<std::string>& bottom,
                     std::optional<std::vector<std::string>> alphabet) {
  std::vector<std::string> alpha = alphabet ? *alphabet : top;
  {
    std::set<std::string> seen(alpha.begin(), alpha.end());
    if (seen.size() != alpha.size()) throw DomainError("repeated symbol in alphabet");
  }
  if (top.size() != alpha.size() || bottom.size() != alpha.size()) {
    throw DomainError("row length differs from alphabet size");
  }
  auto lookup = [&](const std::string& s) -> Letter {
    auto it = std::find(alpha.begin(), alpha.end(), s);
    if (it == alpha.end()) throw DomainError("unknown symbol '" + s + "'");
    return static_cast<Letter>(it - alpha.begin());
  };
  std::vector<Letter> t, b;
  for (const auto& s : top) t.push_back(lookup(s));
  for (const auto& s : bottom) b.push_back(lookup(s));
  return Perm(std::move(alpha), std::move(t), std::move(b));
}

Perm Perm::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw DomainError("permutation text needs a '/' between rows");
  auto split = [](const std::string& row) {
    std::vector<std::string> out;
    std::istringstream in(row);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    if (out.size() == 1 && out[0].size() > 1) {
      std::vector<std::string> chars;
      for (char c : out[0]) chars.emplace_back(1, c);
      return chars;
    }
    return out;
  };
  std::string top = text.substr(0, slash), bottom = text.substr(slash + 1);
  for (auto* s : {&top, &bottom}) {
    std::replace(s->begin(), s->end(), '(', ' ');
    std::replace(s->begin(), s->end(), ')', ' ');
  }
  return from_rows(split(top), split(bottom));
}

Letter Perm::letter(const std::string& s) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), s);
  if (it == alphabet_.end()) throw DomainError("unknown symbol '" + s + "'");
  return static_cast<Letter>(it - alphabet_.begin());
}

std::vector<std::string> Perm::top_symbols() const {
  std::vector<std::string> out;
  for (auto a : top_) out.push_back(alphabet_[a]);
  return out;
}

std::vector<std::string> Perm::bottom_symbols() const {
  std::vector<std::string> out;
  for (auto a : bottom_) out.push_back(alphabet_[a]);
  return out;
}

std::string Perm::key() const {
  std::string s;
  for (std::size_t i = 0; i < top_.size(); ++i) {
    if (i) s += ' ';
    s += alphabet_[top_[i]];
  }
  s += " /";
  for (auto a : bottom_) {
    s += ' ';
    s += alphabet_[a];
  }
  return s;
}

std::vector<std::size_t> monodromy(const Perm& p) {
  std::vector<std::size_t> m(p.d());
  for (std::size_t i = 0; i < p.d(); ++i) m[i] = p.pos_bottom(p.top()[i]);
  return m;
}

std::optional<std::size_t> rotation_shift(const Perm& p) {
  const auto m = monodromy(p);
  const std::size_t d = p.d();
  // 1-based: m(i) - 1 = i + k (mod d); 0-based positions: m0(i) = i + 1 + k.
  for (std::size_t k = 0; k < d; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) ok = m[i] == (i + 1 + k) % d;
    if (ok) return k;
  }
  return std::nullopt;
}

bool is_rotation_type(const Perm& p) { return rotation_shift(p).has_value(); }

bool is_irreducible(const Perm& p) {
  const auto m = monodromy(p);
  // prefix {0..k-1} invariant iff the max of m over it is k-1
  std::size_t hi = 0;
  for (std::size_t k = 1; k < p.d(); ++k) {
    hi = std::max(hi, m[k - 1]);
    if (hi == k - 1) return false;
  }
  return true;
}

IntMatrix omega_matrix(const Perm& p) {
  const std::size_t d = p.d();
  IntMatrix om(d);
  for (Letter a = 0; a < d; ++a) {
    for (Letter b = 0; b < d; ++b) {
      const bool top_before = p.pos_top(a) < p.pos_top(b);
      const bool bottom_after = p.pos_bottom(a) > p.pos_bottom(b);
      if (top_before && bottom_after) {
        om(a, b) = 1;
      } else if (!top_before && a != b && !bottom_after) {
        om(a, b) = -1;
      }
    }
  }
  return om;
}

std::vector<IntVec> kernel_basis(const Perm& p) {
  const IntMatrix om = omega_matrix(p);
  const std::size_t d = p.d();
  RatMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = om(r, c);
  const auto raw = nullspace(m);
  if (raw.empty()) return {};
  RatMatrix basis = RatMatrix::from_rows(raw);
  rref(basis);
  std::vector<IntVec> out;
  for (std::size_t r = 0; r < basis.rows; ++r) {
    RatVec row(basis.a.begin() + static_cast<std::ptrdiff_t>(r * d),
               basis.a.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
    IntVec v = primitive_integer(row);
    auto lead = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
    if (lead == v.end()) continue;
    if (*lead < 0)
      for (auto& x : v) x = -x;
    out.push_back(std::move(v));
  }
  return out;
}

Perm successor(const Perm& p, MoveType t) {
  const Letter at = p.last_top(), ab = p.last_bottom();
  std::vector<Letter> top = p.top(), bottom = p.bottom();
  // the loser leaves the end of its row and is reinserted right after the winner
  auto move_after = [](std::vector<Letter>& row, Letter loser, Letter winner) {
    row.erase(std::find(row.begin(), row.end(), loser));
    row.insert(std::find(row.begin(), row.end(), winner) + 1, loser);
  };
  if (t == MoveType::top) {
    move_after(bottom, ab, at);
  } else {
    move_after(top, at, ab);
  }
  return Perm(p.alphabet(), std::move(top), std::move(bottom));
}

std::optional<Perm> predecessor(const Perm& p, MoveType t) {
  const bool is_top = t == MoveType::top;
  const Letter winner = is_top ? p.last_top() : p.last_bottom();
  std::vector<Letter> changed = is_top ? p.bottom() : p.top();
  const auto w = std::find(changed.begin(), changed.end(), winner);
  if (w + 1 == changed.end()) return std::nullopt;
  const Letter loser = *(w + 1);
  changed.erase(w + 1);
  changed.push_back(loser);
  Perm pred = is_top ? Perm(p.alphabet(), p.top(), std::move(changed))
                     : Perm(p.alphabet(), std::move(changed), p.bottom());
  if (!(successor(pred, t) == p)) return std::nullopt;
  return pred;
}

std::vector<std::string> default_alphabet(std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d; ++i) {
    out.push_back(d <= 26 ? std::string(1, static_cast<char>('A' + i)) : "L" + std::to_string(i + 1));
  }
  return out;
}

Perm canonical_rotation_perm(std::size_t d) {
  if (d < 2) throw DomainError("canonical rotation perm needs d >= 2");
  return canonical_rotation_perm(default_alphabet(d));
}

Perm canonical_rotation_perm(const std::vector<std::string>& alphabet) {
  if (alphabet.size() < 2) throw DomainError("canonical rotation perm needs d >= 2");
  std::vector<std::string> bottom(alphabet.begin() + 1, alphabet.end());
  bottom.push_back(alphabet.front());
  return Perm::from_rows(alphabet, bottom, alphabet);
}

RotationLetters rotation_letters(const Perm& canonical) {
  const Perm pred = canonical_bottom_predecessor(canonical);
  return {canonical.last_top(), canonical.last_bottom(), pred.last_top()};
}

Perm canonical_bottom_predecessor(const Perm& canonical) {
  auto pred = predecessor(canonical, MoveType::bottom);
  if (!pred) throw DomainError("permutation has no bottom-move predecessor");
  return *pred;
}

std::optional<std::size_t> RauzyClass::index_of(const Perm& p) const {
  auto it = index.find(p.key());
  if (it == index.end() || !(perms[it->second] == p)) return std::nullopt;
  return it->second;
}

bool RauzyClass::contains_up_to_relabeling(const Perm& p) const {
  const auto m = monodromy(p);
  return std::any_of(perms.begin(), perms.end(), [&](const Perm& q) { return monodromy(q) == m; });
}

RauzyClass rauzy_class(const Perm& p, std::size_t max_size) {
  if (!is_irreducible(p)) throw DomainError("Rauzy class of a reducible permutation: " + p.key());
  RauzyClass cls;
  std::deque<std::size_t> queue;
  cls.perms.push_back(p);
  cls.index.emplace(p.key(), 0);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (MoveType t : {MoveType::top, MoveType::bottom}) {
      Perm q = successor(cls.perms[i], t);
      auto [it, fresh] = cls.index.emplace(q.key(), cls.perms.size());
      if (fresh) {
        if (cls.perms.size() >= max_size) {
          throw ResourceGuard("Rauzy class exceeds " + std::to_string(max_size) + " permutations");
        }
        cls.perms.push_back(std::move(q));
        queue.push_back(it->second);
      }
      cls.arcs.push_back({i, t, it->second});
    }
  }
  return cls;
}

std::vector<Perm> rotation_type_perms(std::size_t d) {
  const auto alpha = default_alphabet(d);
  std::vector<Perm> out;
  for (std::size_t s = 1; s < d; ++s) {
    // bottom position of the letter at top position i is (i + s) mod d
    std::vector<std::string> bottom(d);
    for (std::size_t i = 0; i < d; ++i) bottom[(i + s) % d] = alpha[i];
    Perm q = Perm::from_rows(alpha, bottom, alpha);
    if (is_irreducible(q)) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace rauzy
