#pragma once

// Independent reference computations used to freeze expected values.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rauzy/combinat.hpp"
#include "rauzy/numeric.hpp"

namespace oracle {

using rauzy::BigInt;
using rauzy::Rational;

/// Partial quotients of 0 < x < 1 by the Euclidean algorithm, x = [a1, a2, ...].
std::vector<BigInt> euclid_cf(const Rational& x);

/// Denominators q_0 = 1, q_1, ... from partial quotients.
std::vector<BigInt> convergent_denominators(const std::vector<BigInt>& a);

std::vector<BigInt> fibonacci(std::size_t n);  // F_1 = 1, F_2 = 1, ...

/// Rotation type by literal 1-based evaluation of the congruence for every k.
bool rotation_by_congruence(const std::vector<std::string>& top, const std::vector<std::string>& bottom);

/// Rauzy class keys by a string-only BFS that does not use the library's moves.
std::set<std::string> rebfs_class(const std::vector<std::string>& top, const std::vector<std::string>& bottom);

/// Number of strongly connected components of the class digraph (Boost).
std::size_t strong_component_count(const rauzy::RauzyClass& cls);

/// Mean of log(q_n)/n over random continued fractions drawn from the Gauss
/// measure, in double precision.
double levy_simulation(std::uint64_t seed, std::size_t samples, std::size_t n);

/// Orthogonal projection of ω onto the kernel of the intersection matrix,
/// built straight from the two rows and solved by Gaussian elimination and
/// Gram-Schmidt in 100-digit decimal arithmetic. Values as decimal strings.
std::vector<std::string> least_squares_kernel_projection(const std::vector<std::string>& top,
                                                         const std::vector<std::string>& bottom,
                                                         const std::vector<long>& omega);

/// One Zorich level of a string-only Rauzy-Veech run on exact lengths.
struct StringLevel {
  std::vector<std::string> top, bottom;
  std::map<std::string, Rational> lengths;  ///< unnormalized
  std::map<std::string, BigInt> heights;
};

/// Levels 0..n (fewer when a tie ends the run), computed from the rows as
/// strings with no use of the library's moves or matrices.
std::vector<StringLevel> string_zorich_levels(const std::vector<std::string>& top,
                                              const std::vector<std::string>& bottom,
                                              const std::map<std::string, Rational>& lengths, std::size_t n);

}  // namespace oracle
