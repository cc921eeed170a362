#include "mms/enumerate.hpp"

#include <algorithm>

namespace mms {

namespace {

void validate(std::size_t n, Coord two_d) {
  if (n < 1 || n > kMaxDim) throw InvalidInput("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (two_d < 2 || two_d % 2 != 0) throw InvalidInput("maximal degree must be even and >= 2");
}

void generate(std::size_t n, Coord budget, std::size_t j, LatticePoint& x, PointSet& out) {
  if (j == n) {
    out.push_back(x);
    return;
  }
  for (Coord v = 0; v <= budget; v += 2) {
    x[j] = v;
    generate(n, budget - v, j + 1, x, out);
  }
  x[j] = 0;
}

}  // namespace

VertexList vertex_list(std::size_t n, Coord two_d) {
  validate(n, two_d);
  VertexList v{n, two_d, {}};
  LatticePoint x(n);
  generate(n, two_d, 0, x, v.rows);
  v.rows.erase(v.rows.begin());  // the origin is lex-first
  return v;
}

std::uint64_t vertex_count(std::size_t n, Coord two_d) {
  validate(n, two_d);
  // C(n + d, n) computed incrementally; exact at every step.
  const auto d = static_cast<std::uint64_t>(two_d / 2);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= n; ++i) c = c * (d + i) / i;
  return static_cast<std::uint64_t>(c) - 1;
}

std::size_t rank_of(const VertexList& v, std::span<const std::size_t> rows) {
  EchelonBasis basis(v.n);
  for (std::size_t r : rows) basis.add(v.rows.at(r).coords());
  return basis.rank();
}

namespace {

// Advance the prefix J[0..=t_max] to its lex successor among index sets that
// still leave room for n entries, refilling the tail consecutively. Returns
// the changed position or nullopt when exhausted.
std::optional<std::size_t> bump_prefix(IndexSet& j, std::size_t t_max, std::size_t m) {
  const std::size_t n = j.size();
  for (std::size_t t = t_max + 1; t-- > 0;) {
    if (j[t] < m - n + t) {
      ++j[t];
      for (std::size_t u = t + 1; u < n; ++u) j[u] = j[u - 1] + 1;
      return t;
    }
  }
  return std::nullopt;
}

std::optional<IndexSet> settle(const VertexList& v, IndexSet j, std::size_t from) {
  const std::size_t n = j.size();
  const std::size_t m = v.size();
  std::size_t k = from;
  while (k < n) {
    if (rank_of(v, std::span<const std::size_t>(j.data(), k + 1)) < k + 1) {
      auto t = bump_prefix(j, k, m);
      if (!t) return std::nullopt;
      k = *t;
      continue;
    }
    ++k;
  }
  return j;
}

}  // namespace

std::optional<IndexSet> lex_next_full_rank(const VertexList& v, const IndexSet& i) {
  const std::size_t n = v.n;
  const std::size_t m = v.size();
  if (i.size() != n) throw InvalidInput("index set size must equal the dimension");
  for (std::size_t t = 0; t < n; ++t)
    if (i[t] >= m || (t && i[t] <= i[t - 1])) throw InvalidInput("index set must be strictly increasing and in range");
  IndexSet j = i;
  auto t = bump_prefix(j, n - 1, m);
  if (!t) return std::nullopt;
  return settle(v, std::move(j), 0);
}

std::optional<IndexSet> first_full_rank(const VertexList& v) {
  if (v.size() < v.n) return std::nullopt;
  IndexSet j(v.n);
  for (std::size_t t = 0; t < v.n; ++t) j[t] = t;
  return settle(v, std::move(j), 0);
}

// ---- SimplexEnumerator -----------------------------------------------------

SimplexEnumerator::SimplexEnumerator(std::size_t n, Coord two_d, std::optional<std::size_t> partition)
    : v_(vertex_list(n, two_d)), n_(n) {
  init(partition);
}

SimplexEnumerator::SimplexEnumerator(VertexList v, std::optional<std::size_t> partition) : v_(std::move(v)), n_(v_.n) {
  init(partition);
}

void SimplexEnumerator::init(std::optional<std::size_t> partition) {
  const std::size_t m = v_.size();
  if (partition && *partition >= m)
    throw InvalidInput("partition " + std::to_string(*partition) + " out of range [0, " + std::to_string(m) + ")");
  j_.assign(n_, 0);
  cand_.assign(n_, 0);
  basis_ = EchelonBasis(n_);
  if (m < n_) {
    done_ = true;
    return;
  }
  first_lo_ = partition ? *partition : 0;
  first_hi_ = partition ? std::min(*partition, m - n_) : m - n_;
  if (first_lo_ > first_hi_) done_ = true;
  cand_[0] = first_lo_;
}

bool SimplexEnumerator::next(IndexSet& out) {
  if (done_) return false;
  EchelonBasis& basis = basis_;
  const std::size_t m = v_.size();
  std::vector<Coord> scratch(n_);
  while (true) {
    if (depth_ == n_) {
      out = j_;
      depth_ = n_ - 1;
      basis.truncate(depth_);
      cand_[depth_] = j_[depth_] + 1;
      return true;
    }
    const std::size_t hi = depth_ == 0 ? first_hi_ : m - n_ + depth_;
    const std::size_t c = cand_[depth_];
    if (c > hi) {
      if (depth_ == 0) {
        done_ = true;
        return false;
      }
      --depth_;
      basis.truncate(depth_);
      cand_[depth_] = j_[depth_] + 1;
      continue;
    }
    const auto row = v_.rows[c].coords();
    std::copy(row.begin(), row.end(), scratch.begin());
    if (basis.reduce(scratch)) {
      basis.push_reduced(scratch);
      j_[depth_] = c;
      ++depth_;
      if (depth_ < n_) cand_[depth_] = c + 1;
    } else {
      cand_[depth_] = c + 1;
    }
  }
}

SimplicialSet SimplexEnumerator::simplex(const IndexSet& j) const {
  std::vector<LatticePoint> pts;
  pts.reserve(j.size() + 1);
  pts.emplace_back(n_);
  for (std::size_t r : j) pts.push_back(v_.rows[r]);
  return SimplicialSet(std::move(pts));
}

std::optional<SimplicialSet> SimplexEnumerator::next_simplex() {
  IndexSet j;
  if (!next(j)) return std::nullopt;
  return simplex(j);
}

std::uint64_t count_simplices(std::size_t n, Coord two_d, std::optional<std::size_t> partition) {
  SimplexEnumerator e(n, two_d, partition);
  IndexSet j;
  std::uint64_t count = 0;
  while (e.next(j)) ++count;
  return count;
}

}  // namespace mms
