#include "rauzy/random.hpp"

#include <algorithm>

#include "rauzy/error.hpp"

namespace rauzy {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

BigInt random_bits(std::mt19937_64& rng, std::size_t bits) {
  BigInt x = 0;
  std::size_t filled = 0;
  while (filled < bits) {
    const std::size_t take = std::min<std::size_t>(64, bits - filled);
    std::uint64_t word = rng();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    x <<= static_cast<mp_bitcnt_t>(take);
    // two 32-bit halves: unsigned long may be 32 bits on some platforms
    x += BigInt(static_cast<unsigned long>(word >> 32)) * BigInt(4294967296UL) +
         BigInt(static_cast<unsigned long>(word & 0xffffffffULL));
    filled += take;
  }
  return x;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

RatVec random_simplex_point(std::mt19937_64& rng, std::size_t d, std::size_t bits) {
  if (d < 1 || bits < 2) throw DomainError("simplex sampling needs d >= 1 and bits >= 2");
  BigInt scale = 1;
  scale <<= static_cast<mp_bitcnt_t>(bits);
  for (;;) {
    std::vector<BigInt> cuts;
    cuts.reserve(d + 1);
    cuts.push_back(0);
    for (std::size_t i = 0; i + 1 < d; ++i) cuts.push_back(random_bits(rng, bits));
    cuts.push_back(scale);
    std::sort(cuts.begin(), cuts.end());
    RatVec out;
    bool degenerate = false;
    for (std::size_t i = 0; i < d; ++i) {
      BigInt gap = cuts[i + 1] - cuts[i];
      if (gap == 0) {
        degenerate = true;
        break;
      }
      Rational q(gap, scale);
      q.canonicalize();
      out.push_back(std::move(q));
    }
    if (!degenerate) return out;
  }
}

}  // namespace rauzy
