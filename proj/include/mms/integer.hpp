#pragma once

// Overflow-checked 64-bit integer helpers and small exact linear algebra
// used by the geometry, enumeration and canonicalization layers.

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace mms {

using Coord = std::int64_t;

inline Coord checked_mul(Coord a, Coord b) {
  Coord r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
  return r;
}

inline Coord checked_add(Coord a, Coord b) {
  Coord r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
  return r;
}

inline Coord checked_sub(Coord a, Coord b) {
  Coord r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 subtraction overflow");
  return r;
}

inline Coord narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("value does not fit in int64");
  return static_cast<Coord>(v);
}

/// Floor division for a positive divisor.
inline Coord floor_div(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Incremental row-echelon basis over Q, stored fraction-free: every row is
/// primitive (content 1) with a positive leading entry. Adding a row
/// reports whether it was linearly independent of the rows so far.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t width) : width_(width) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t rank() const noexcept { return pivots_.size(); }

  /// Reduce `row` against the basis; returns true and appends it if the
  /// remainder is nonzero.
  bool add(std::span<const Coord> row) {
    std::vector<Coord> r(row.begin(), row.end());
    if (!reduce(r)) return false;
    push_reduced(r);
    return true;
  }

  /// True iff `row` lies outside the current span (does not modify).
  bool independent(std::span<const Coord> row) const {
    std::vector<Coord> r(row.begin(), row.end());
    return reduce(r);
  }

  /// Drop rows beyond `k` (used for depth-first prefix reuse).
  void truncate(std::size_t k) {
    pivots_.resize(k);
    rows_.resize(k * width_);
  }

  /// Append a row already returned nonzero by reduce().
  void push_reduced(const std::vector<Coord>& r) {
    std::size_t p = 0;
    while (r[p] == 0) ++p;
    pivots_.push_back(p);
    rows_.insert(rows_.end(), r.begin(), r.end());
  }

  /// Reduce in place; returns true iff the remainder is nonzero. On true the
  /// remainder is primitive with positive leading entry.
  bool reduce(std::vector<Coord>& r) const {
    for (std::size_t b = 0; b < pivots_.size(); ++b) {
      const std::size_t p = pivots_[b];
      const Coord rp = r[p];
      if (rp == 0) continue;
      const Coord* brow = &rows_[b * width_];
      const Coord bp = brow[p];
      const Coord g = std::gcd(bp, rp);
      const Coord fr = bp / g, fb = rp / g;
      for (std::size_t j = 0; j < width_; ++j)
        r[j] = checked_sub(checked_mul(r[j], fr), checked_mul(brow[j], fb));
      make_primitive(r);
    }
    for (Coord v : r)
      if (v != 0) {
        make_primitive(r);
        return true;
      }
    return false;
  }

 private:
  static void make_primitive(std::vector<Coord>& r) {
    Coord g = 0;
    for (Coord v : r) g = std::gcd(g, v);
    if (g > 1)
      for (Coord& v : r) v /= g;
    for (Coord v : r) {
      if (v == 0) continue;
      if (v < 0)
        for (Coord& w : r) w = -w;
      break;
    }
  }


  std::size_t width_;
  std::vector<std::size_t> pivots_;
  std::vector<Coord> rows_;
};

/// Exact rank of a row-major integer matrix.
inline std::size_t integer_rank(std::span<const Coord> entries, std::size_t rows, std::size_t cols) {
  EchelonBasis basis(cols);
  for (std::size_t i = 0; i < rows; ++i) basis.add(entries.subspan(i * cols, cols));
  return basis.rank();
}

}  // namespace mms
