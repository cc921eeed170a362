#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "mms/error.hpp"
#include "mms/integer.hpp"

namespace mms {

/// Largest supported ambient dimension.
inline constexpr std::size_t kMaxDim = 12;

using Rational = mpq_class;

/// Integer exponent vector in Z^n. Stored inline (no heap) since the hot
/// loops create millions of these. Ordered lexicographically.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim);
  LatticePoint(std::initializer_list<Coord> coords);
  explicit LatticePoint(std::span<const Coord> coords);

  std::size_t dim() const noexcept { return dim_; }
  Coord operator[](std::size_t i) const noexcept { return c_[i]; }
  Coord& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const Coord> coords() const noexcept { return {c_.data(), dim_}; }

  Coord norm1() const noexcept;

  LatticePoint& operator+=(const LatticePoint& o) noexcept;
  LatticePoint& operator-=(const LatticePoint& o) noexcept;
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) noexcept { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) noexcept { return a -= b; }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) noexcept;
  friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) noexcept;

 private:
  std::array<Coord, kMaxDim> c_{};
  std::uint8_t dim_ = 0;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

/// Lex-sorted, duplicate-free list of points.
using PointSet = std::vector<LatticePoint>;

void sort_unique(PointSet& s);
bool set_contains(const PointSet& sorted, const LatticePoint& p);
bool is_subset(const PointSet& sorted_sub, const PointSet& sorted_super);

/// Affinely independent even point set (a k-simplicial set). Points are kept
/// in lexicographic order. Construction validates every invariant.
class SimplicialSet {
 public:
  /// Throws InvalidInput when empty, dimension-mismatched, odd or affinely
  /// dependent.
  explicit SimplicialSet(std::vector<LatticePoint> points);

  const PointSet& points() const noexcept { return points_; }
  std::size_t ambient_dim() const noexcept { return points_.front().dim(); }
  std::size_t simplex_dim() const noexcept { return points_.size() - 1; }
  std::size_t size() const noexcept { return points_.size(); }
  bool full_dimensional() const noexcept { return simplex_dim() == ambient_dim(); }
  bool has_vertex(const LatticePoint& p) const { return set_contains(points_, p); }

  friend bool operator==(const SimplicialSet&, const SimplicialSet&) = default;
  friend auto operator<=>(const SimplicialSet& a, const SimplicialSet& b) { return a.points_ <=> b.points_; }

 private:
  PointSet points_;
};

/// Barycentric coordinates lambda_0..lambda_k of a point relative to the
/// vertices of a simplex (in the simplex's lexicographic vertex order).
struct RationalCoeffs {
  std::vector<Rational> lambda;

  bool nonnegative() const;
  bool strictly_positive() const;
};

// ---- text form -------------------------------------------------------------

/// "1,2,-3"
std::string to_string(const LatticePoint& p);
/// "0,0;2,4;4,2"
std::string to_string(const PointSet& s);
std::string to_string(const SimplicialSet& s);

LatticePoint parse_point(std::string_view text);
PointSet parse_points(std::string_view text);
SimplicialSet parse_simplicial_set(std::string_view text);

// ---- operations ------------------------------------------------------------

bool is_even(const LatticePoint& p) noexcept;

/// Midpoints of unordered pairs of distinct even points of `points`.
/// Result is lex-sorted and duplicate-free.
PointSet midpoint_set(std::span<const LatticePoint> points);

/// Exact barycentric solve over Q. Returns nullopt when p is outside the
/// affine hull of `delta`.
std::optional<RationalCoeffs> barycentric(const SimplicialSet& delta, std::span<const Rational> p);
std::optional<RationalCoeffs> barycentric(const SimplicialSet& delta, const LatticePoint& p);

/// p in conv(delta), boundary included.
bool contains(const SimplicialSet& delta, const LatticePoint& p);
bool contains(const SimplicialSet& delta, std::span<const Rational> p);
/// p in the relative interior of conv(delta).
bool contains_strictly(const SimplicialSet& delta, const LatticePoint& p);

/// Integer halfspace/equation description of conv(delta): x is in the
/// simplex iff every `equalities` row gives 0 and every `inequalities` row
/// gives >= 0, where a row (a, c) evaluates a.x - c. Built once per simplex
/// with fraction-free elimination, then each test is a handful of integer
/// dot products.
class SimplexFrame {
 public:
  explicit SimplexFrame(const SimplicialSet& delta);

  bool contains(const LatticePoint& p) const;
  bool contains_strictly(const LatticePoint& p) const;

  /// conv(delta) ∩ Z^n, lex-sorted. Scans the integer bounding box of the
  /// vertices with branch-and-bound pruning on the constraint rows.
  PointSet lattice_points() const;

 private:
  struct Row {
    std::array<Coord, kMaxDim> a{};
    Coord c = 0;
  };
  std::size_t dim_;
  std::vector<Row> ineq_;
  std::vector<Row> eq_;
  LatticePoint lo_, hi_;
};

/// conv(delta) ∩ Z^n, lex-sorted (via SimplexFrame).
PointSet lattice_points(const SimplicialSet& delta);

/// lattice_points filtered to even points, lex-sorted.
PointSet even_lattice_points(const SimplicialSet& delta);

Coord max_degree(const SimplicialSet& delta) noexcept;
bool is_trellis(std::span<const LatticePoint> points) noexcept;

/// Rank of the vertex differences v_i - v_0 equals #points - 1.
bool affinely_independent(std::span<const LatticePoint> points);

}  // namespace mms
