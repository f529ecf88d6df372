#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rauzy/numeric.hpp"

namespace rauzy {

/// Index of a letter in the alphabet of a Perm.
using Letter = std::size_t;

enum class MoveType { top, bottom };

const char* to_string(MoveType t) noexcept;
MoveType other(MoveType t) noexcept;

/// Combinatorial datum: two orderings of the same alphabet, the order of the
/// intervals before (top) and after (bottom) the exchange.
///
/// Positions are 0-based internally. The alphabet is fixed at construction and
/// is carried unchanged through Rauzy moves, so matrices indexed by letters
/// stay comparable along an orbit.
class Perm {
 public:
  Perm() = default;

  /// Rows given as symbol sequences. The alphabet defaults to the order of
  /// the top row.
  static Perm from_rows(const std::vector<std::string>& top, const std::vector<std::string>& bottom,
                        std::optional<std::vector<std::string>> alphabet = std::nullopt);
  /// Parses "A B C / C A B"; single-character symbols may be written "ABC/CAB".
  static Perm parse(const std::string& text);

  std::size_t d() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::string& symbol(Letter a) const { return alphabet_.at(a); }
  Letter letter(const std::string& symbol) const;

  const std::vector<Letter>& top() const noexcept { return top_; }
  const std::vector<Letter>& bottom() const noexcept { return bottom_; }
  std::size_t pos_top(Letter a) const { return pos_top_.at(a); }
  std::size_t pos_bottom(Letter a) const { return pos_bottom_.at(a); }

  Letter last_top() const { return top_.back(); }
  Letter last_bottom() const { return bottom_.back(); }

  std::vector<std::string> top_symbols() const;
  std::vector<std::string> bottom_symbols() const;

  /// Stable text form "A B C / C A B".
  std::string key() const;

  /// Same rows over the same alphabet.
  friend bool operator==(const Perm& a, const Perm& b) {
    return a.alphabet_ == b.alphabet_ && a.top_ == b.top_ && a.bottom_ == b.bottom_;
  }

 private:
  Perm(std::vector<std::string> alphabet, std::vector<Letter> top, std::vector<Letter> bottom);
  void validate_and_index();

  std::vector<std::string> alphabet_;
  std::vector<Letter> top_;
  std::vector<Letter> bottom_;
  std::vector<std::size_t> pos_top_;
  std::vector<std::size_t> pos_bottom_;

  friend Perm successor(const Perm&, MoveType);
  friend std::optional<Perm> predecessor(const Perm&, MoveType);
};

/// Monodromy as a 0-based map of positions: m[i] = bottom position of the
/// letter at top position i.
std::vector<std::size_t> monodromy(const Perm& p);

/// Shift k with (m(i) - 1) = i + k mod d in 1-based positions, if any.
std::optional<std::size_t> rotation_shift(const Perm& p);
bool is_rotation_type(const Perm& p);
bool is_irreducible(const Perm& p);

/// Antisymmetric intersection matrix indexed by letters.
IntMatrix omega_matrix(const Perm& p);

/// Integer basis of the kernel of the intersection matrix.
///
/// The basis is the row-reduced echelon form of any kernel basis, each row
/// scaled to coprime integers with positive leading entry, in order of pivot
/// column.
std::vector<IntVec> kernel_basis(const Perm& p);

/// Result of one Rauzy move of the given type.
Perm successor(const Perm& p, MoveType t);

/// The unique q with successor(q, t) == p, or nullopt when the move cannot
/// produce p (when the loser would already sit right after the winner).
std::optional<Perm> predecessor(const Perm& p, MoveType t);

/// (A1 ... Ad / A2 ... Ad A1) over the alphabet A, B, C, ... (or A1.. for d > 26).
Perm canonical_rotation_perm(std::size_t d);
/// Same shape over a given alphabet order.
Perm canonical_rotation_perm(const std::vector<std::string>& alphabet);
/// Default letter names for dimension d.
std::vector<std::string> default_alphabet(std::size_t d);

/// Distinguished letters of the canonical rotation perm.
struct RotationLetters {
  Letter last_top;     ///< letter ending the top row
  Letter last_bottom;  ///< letter ending the bottom row
  Letter pred_last_top; ///< last top letter of the bottom-move predecessor
};
RotationLetters rotation_letters(const Perm& canonical);

/// Predecessor of the canonical rotation perm by a bottom move.
Perm canonical_bottom_predecessor(const Perm& canonical);

struct RauzyArc {
  std::size_t from;
  MoveType type;
  std::size_t to;
};

/// Rauzy class as a node list (BFS discovery order, top move explored first)
/// and its arcs.
struct RauzyClass {
  std::vector<Perm> perms;
  std::vector<RauzyArc> arcs;
  std::unordered_map<std::string, std::size_t> index;  ///< key() -> position in perms

  std::optional<std::size_t> index_of(const Perm& p) const;
  bool contains(const Perm& p) const { return index_of(p).has_value(); }
  /// True when some member has the same monodromy, i.e. p is a member after
  /// relabeling the alphabet.
  bool contains_up_to_relabeling(const Perm& p) const;
};

/// BFS closure under both moves. Throws ResourceGuard when more than
/// `max_size` permutations are discovered.
RauzyClass rauzy_class(const Perm& p, std::size_t max_size = 1'000'000);

/// All irreducible rotation-type perms with top row in alphabet order.
std::vector<Perm> rotation_type_perms(std::size_t d);

}  // namespace rauzy
