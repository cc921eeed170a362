#include "mms/sampler.hpp"

#include "mms/enumerate.hpp"

namespace mms {

void SamplerConfig::validate() const {
  if (n < 1 || n > kMaxDim) throw InvalidInput("sampler dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (two_d < 2 || two_d % 2 != 0) throw InvalidInput("sampler degree must be even and >= 2");
  if (count < 1) throw InvalidInput("sample count must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL)));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("empty range");
  // 2^64 mod bound; values below it would bias the modulo.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

namespace {

// Number of points of N^m with 1-norm <= s: C(m + s, m).
std::uint64_t simplex_count(std::size_t m, std::uint64_t s) {
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= m; ++i) c = c * (s + i) / i;
  return static_cast<std::uint64_t>(c);
}

}  // namespace

LatticePoint unrank_even_point(std::size_t n, Coord two_d, std::uint64_t rank) {
  const std::uint64_t total = vertex_count(n, two_d);
  if (rank >= total) throw InvalidInput("rank out of range");
  // Work with halves y = x / 2 in N^n, |y| <= d; rank + 1 skips the origin.
  std::uint64_t r = rank + 1;
  std::uint64_t budget = static_cast<std::uint64_t>(two_d / 2);
  LatticePoint p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t rest = n - j - 1;
    std::uint64_t y = 0;
    while (true) {
      const std::uint64_t block = simplex_count(rest, budget - y);
      if (r < block) break;
      r -= block;
      ++y;
    }
    p[j] = static_cast<Coord>(2 * y);
    budget -= y;
  }
  return p;
}

LatticePoint uniform_point(std::size_t n, Coord two_d, std::mt19937_64& rng) {
  return unrank_even_point(n, two_d, uniform_below(rng, vertex_count(n, two_d)));
}

SimplicialSet sample_simplex(const SamplerConfig& cfg, std::uint64_t index) {
  cfg.validate();
  auto rng = substream(cfg.seed, index);
  const std::size_t n = cfg.n;
  std::vector<LatticePoint> pts(n + 1, LatticePoint(n));
  while (true) {
    EchelonBasis basis(n);
    bool ok = true;
    // Draw all n points every attempt so the stream does not depend on where
    // a dependency was first noticed.
    for (std::size_t i = 1; i <= n; ++i) pts[i] = uniform_point(n, cfg.two_d, rng);
    for (std::size_t i = 1; i <= n && ok; ++i) ok = basis.add(pts[i].coords());
    if (ok) return SimplicialSet(pts);
  }
}

SimplexSampler::SimplexSampler(SamplerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<SimplicialSet> SimplexSampler::next() {
  if (index_ >= cfg_.count) return std::nullopt;
  return sample_simplex(cfg_, index_++);
}

}  // namespace mms
