#pragma once

#include <cstdint>
#include <random>

#include "mms/lattice.hpp"

namespace mms {

struct SamplerConfig {
  std::size_t n = 2;
  Coord two_d = 2;
  std::uint64_t seed = 1;
  std::uint64_t count = 1;

  void validate() const;
};

/// SplitMix64 finalizer; used to derive independent substreams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for sample `index` of the stream keyed by `seed`. Every sample
/// owns its substream, so samples can be produced in any order or split
/// across workers without changing the output.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, bound) by rejection (no modulo bias, portable).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Even point with a given 0-based rank in the lex-ordered list of even,
/// nonnegative, nonzero points of 1-norm <= 2d (same order as vertex_list).
LatticePoint unrank_even_point(std::size_t n, Coord two_d, std::uint64_t rank);

/// Uniform over the C(n+d, n) - 1 even nonzero points of 1-norm <= 2d.
LatticePoint uniform_point(std::size_t n, Coord two_d, std::mt19937_64& rng);

/// Sample i: draw n points with uniform_point from substream(seed, i) until
/// they are affinely independent together with the origin.
SimplicialSet sample_simplex(const SamplerConfig& cfg, std::uint64_t index);

/// Stream of cfg.count accepted samples.
class SimplexSampler {
 public:
  explicit SimplexSampler(SamplerConfig cfg);

  std::optional<SimplicialSet> next();
  std::uint64_t produced() const noexcept { return index_; }

 private:
  SamplerConfig cfg_;
  std::uint64_t index_ = 0;
};

}  // namespace mms
