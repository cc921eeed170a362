#pragma once

#include <optional>
#include <vector>

#include "mms/lattice.hpp"

namespace mms {

/// Lex-ordered even, nonnegative, nonzero points of 1-norm at most 2d.
struct VertexList {
  std::size_t n = 0;
  Coord two_d = 0;
  PointSet rows;

  std::size_t size() const noexcept { return rows.size(); }
};

/// Strictly increasing 0-based row indices into a VertexList.
using IndexSet = std::vector<std::size_t>;

/// Throws InvalidInput unless n >= 1 and two_d is even and >= 2.
VertexList vertex_list(std::size_t n, Coord two_d);

/// C(n + d, n) - 1, the row count of vertex_list(n, 2d).
std::uint64_t vertex_count(std::size_t n, Coord two_d);

/// Exact rank of the rows of V selected by `rows`.
std::size_t rank_of(const VertexList& v, std::span<const std::size_t> rows);

/// Smallest n-index set J > I (lex) whose rows have full rank n. A
/// rank-deficient prefix K skips every index set extending K.
std::optional<IndexSet> lex_next_full_rank(const VertexList& v, const IndexSet& i);

/// Lex-smallest full-rank n-index set, if any.
std::optional<IndexSet> first_full_rank(const VertexList& v);

/// Streams every full-rank n-index set of V in lex order (depth-first, with
/// the echelon basis of the current prefix cached along the path). With a
/// partition only index sets whose first index equals it are produced.
class SimplexEnumerator {
 public:
  SimplexEnumerator(std::size_t n, Coord two_d, std::optional<std::size_t> partition = std::nullopt);
  explicit SimplexEnumerator(VertexList v, std::optional<std::size_t> partition = std::nullopt);

  const VertexList& vertices() const noexcept { return v_; }

  bool next(IndexSet& out);
  std::optional<SimplicialSet> next_simplex();

  /// {0} ∪ rows of V at J.
  SimplicialSet simplex(const IndexSet& j) const;

 private:
  void init(std::optional<std::size_t> partition);

  VertexList v_;
  std::size_t n_;
  std::size_t first_lo_ = 0, first_hi_ = 0;  // inclusive range for J[0]
  IndexSet j_;
  std::vector<std::size_t> cand_;
  EchelonBasis basis_{1};  // spans rows J[0..depth)
  std::size_t depth_ = 0;
  bool done_ = false;
};

/// Counts without materializing simplices.
std::uint64_t count_simplices(std::size_t n, Coord two_d, std::optional<std::size_t> partition = std::nullopt);

}  // namespace mms
