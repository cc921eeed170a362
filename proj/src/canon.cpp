#include "mms/canon.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace mms {

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<Coord>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
    e_.insert(e_.end(), r.begin(), r.end());
  }
}

IntegerMatrix IntegerMatrix::with_columns_permuted(std::span<const std::size_t> order) const {
  IntegerMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, order[c]);
  return out;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidInput("matrix shape mismatch");
  IntegerMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) {
      Coord s = 0;
      for (std::size_t t = 0; t < cols_; ++t) s = checked_add(s, checked_mul((*this)(i, t), o(t, j)));
      out(i, j) = s;
    }
  return out;
}

std::string to_string(const IntegerMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += std::to_string(m(r, c));
    }
  }
  return out + "]";
}

std::string serialize_key(const IntegerMatrix& h) {
  std::string out = std::to_string(h.rows()) + "x" + std::to_string(h.cols()) + ":";
  char buf[32];
  for (std::size_t i = 0; i < h.entries().size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%010lld", static_cast<long long>(h.entries()[i]));
    out += buf;
  }
  return out;
}

namespace {

// The origin when it is a vertex, else the lex-minimal vertex.
std::size_t anchor_index(const SimplicialSet& delta) {
  const auto& pts = delta.points();
  const LatticePoint zero(delta.ambient_dim());
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == zero) return i;
  return 0;
}

}  // namespace

SimplicialSet translate_to_origin(const SimplicialSet& delta) {
  const LatticePoint base = delta.points()[anchor_index(delta)];
  std::vector<LatticePoint> pts;
  pts.reserve(delta.size());
  for (const auto& p : delta.points()) pts.push_back(p - base);
  return SimplicialSet(std::move(pts));
}

IntegerMatrix generator_matrix(const SimplicialSet& delta) {
  const std::size_t n = delta.ambient_dim();
  const std::size_t k = delta.simplex_dim();
  const std::size_t a = anchor_index(delta);
  const LatticePoint& base = delta.points()[a];
  IntegerMatrix m(n, k);
  std::size_t c = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (i == a) continue;
    for (std::size_t r = 0; r < n; ++r) m(r, c) = checked_sub(delta.points()[i][r], base[r]);
    ++c;
  }
  return m;
}

IntegerMatrix hnf(const IntegerMatrix& input) {
  IntegerMatrix h = input;
  const std::size_t rows = h.rows(), cols = h.cols();
  auto row_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < cols; ++c) std::swap(h(a, c), h(b, c));
  };
  // row a -= q * row b
  auto row_axpy = [&](std::size_t a, std::size_t b, Coord q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < cols; ++c) h(a, c) = checked_sub(h(a, c), checked_mul(q, h(b, c)));
  };

  std::size_t pr = 0;
  for (std::size_t c = 0; c < cols && pr < rows; ++c) {
    // Euclid down the column until only row pr is nonzero.
    while (true) {
      std::size_t best = rows;
      for (std::size_t r = pr; r < rows; ++r)
        if (h(r, c) != 0 && (best == rows || std::abs(h(r, c)) < std::abs(h(best, c)))) best = r;
      if (best == rows) break;
      if (best != pr) row_swap(best, pr);
      bool done = true;
      for (std::size_t r = pr + 1; r < rows; ++r) {
        if (h(r, c) == 0) continue;
        row_axpy(r, pr, h(r, c) / h(pr, c));
        if (h(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(pr, c) == 0) continue;
    if (h(pr, c) < 0)
      for (std::size_t cc = 0; cc < cols; ++cc) h(pr, cc) = -h(pr, cc);
    const Coord piv = h(pr, c);
    for (std::size_t r = 0; r < pr; ++r) row_axpy(r, pr, floor_div(h(r, c), piv));
    ++pr;
  }
  return h;
}

Coord abs_det(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("determinant of non-square matrix");
  const IntegerMatrix h = hnf(m);
  Coord d = 1;
  for (std::size_t i = 0; i < h.rows(); ++i) d = checked_mul(d, h(i, i));
  return d;
}

std::vector<Coord> column_gcds(const IntegerMatrix& m) {
  std::vector<Coord> g(m.cols(), 0);
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) g[c] = std::gcd(g[c], m(r, c));
  std::sort(g.begin(), g.end());
  return g;
}

namespace {

// Visit HNF(M·P) for every column permutation P whose first column attains
// the minimal column gcd (H(0,0) is that gcd, so only those can be minimal).
// With `all` set, every permutation is visited.
template <typename Visit>
void for_each_permuted_hnf(const IntegerMatrix& m, bool all, Visit&& visit) {
  const std::size_t k = m.cols();
  std::vector<Coord> g(k, 0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) g[c] = std::gcd(g[c], m(r, c));
  const Coord gmin = k ? *std::min_element(g.begin(), g.end()) : 0;
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  do {
    if (!all && k && g[order[0]] != gmin) continue;
    visit(hnf(m.with_columns_permuted(order)));
  } while (std::next_permutation(order.begin(), order.end()));
}

CanonicalLatticeKey key_from_generator(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("canonical key requires a full-dimensional simplex");
  IntegerMatrix best;
  bool have = false;
  for_each_permuted_hnf(m, false, [&](IntegerMatrix h) {
    if (!have || std::lexicographical_compare(h.entries().begin(), h.entries().end(), best.entries().begin(), best.entries().end())) {
      best = std::move(h);
      have = true;
    }
  });
  if (abs_det(best) == 0) throw InvalidInput("generator matrix is singular");
  return {best, serialize_key(best)};
}

}  // namespace

CanonicalLatticeKey canonical_key(const IntegerMatrix& generator) { return key_from_generator(generator); }

CanonicalLatticeKey canonical_key(const SimplicialSet& delta) {
  if (!delta.full_dimensional()) throw InvalidInput("canonical key requires a full-dimensional simplex");
  return key_from_generator(generator_matrix(delta));
}

bool equivalent(const SimplicialSet& a, const SimplicialSet& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidInput("dimension mismatch in equivalent");
  if (!a.full_dimensional() || !b.full_dimensional()) throw InvalidInput("equivalent requires full-dimensional simplices");
  const IntegerMatrix ga = generator_matrix(a), gb = generator_matrix(b);
  if (abs_det(ga) != abs_det(gb)) return false;
  if (column_gcds(ga) != column_gcds(gb)) return false;
  return canonical_key(ga) == canonical_key(gb);
}

CanonicalLatticeKey Canonicalizer::key(const SimplicialSet& delta) {
  if (!delta.full_dimensional()) throw InvalidInput("canonical key requires a full-dimensional simplex");
  return key(generator_matrix(delta));
}

CanonicalLatticeKey Canonicalizer::key(const IntegerMatrix& generator) {
  std::string plain = serialize_key(hnf(generator));
  if (auto it = cache_.find(plain); it != cache_.end()) return it->second;
  ++misses_;
  std::vector<IntegerMatrix> variants;
  for_each_permuted_hnf(generator, true, [&](IntegerMatrix h) { variants.push_back(std::move(h)); });
  const IntegerMatrix& best = *std::min_element(variants.begin(), variants.end(), [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.entries().begin(), x.entries().end(), y.entries().begin(), y.entries().end());
  });
  if (abs_det(best) == 0) throw InvalidInput("generator matrix is singular");
  CanonicalLatticeKey k{best, serialize_key(best)};
  for (const auto& v : variants) cache_.emplace(serialize_key(v), k);
  cache_.emplace(std::move(plain), k);
  return k;
}

}  // namespace mms
