#pragma once

#include <compare>
#include <string>
#include <unordered_map>
#include <vector>

#include "mms/lattice.hpp"

namespace mms {

/// Dense row-major integer matrix.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols);
  IntegerMatrix(std::initializer_list<std::initializer_list<Coord>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Coord operator()(std::size_t r, std::size_t c) const noexcept { return e_[r * cols_ + c]; }
  Coord& operator()(std::size_t r, std::size_t c) noexcept { return e_[r * cols_ + c]; }
  std::span<const Coord> entries() const noexcept { return e_; }
  std::span<const Coord> row(std::size_t r) const noexcept { return {e_.data() + r * cols_, cols_}; }

  IntegerMatrix with_columns_permuted(std::span<const std::size_t> order) const;
  IntegerMatrix operator*(const IntegerMatrix& o) const;

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;
  friend auto operator<=>(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Coord> e_;
};

std::string to_string(const IntegerMatrix& m);

/// Lattice key: the lexicographically smallest row-style HNF over all column
/// permutations of the generator matrix, and its byte serialization.
///
/// Byte format: "<rows>x<cols>:" followed by the row-major entries, each as
/// a zero-padded 10-digit decimal, separated by ','. HNF entries are
/// nonnegative, so byte order agrees with numeric order entry by entry.
struct CanonicalLatticeKey {
  IntegerMatrix hnf;
  std::string bytes;

  friend bool operator==(const CanonicalLatticeKey& a, const CanonicalLatticeKey& b) { return a.bytes == b.bytes; }
  friend auto operator<=>(const CanonicalLatticeKey& a, const CanonicalLatticeKey& b) { return a.bytes <=> b.bytes; }
};

std::string serialize_key(const IntegerMatrix& hnf);

/// Anchor vertex: the origin if it is a vertex, else the lex-minimal vertex.
/// The key depends on this choice; simplices from the enumerator always
/// contain the origin.
///
/// Translate so that the anchor sits at the origin.
SimplicialSet translate_to_origin(const SimplicialSet& delta);

/// Columns are the other vertices (lex order) minus the anchor; the rows
/// generate the lattice of Δ. Shape n × k.
IntegerMatrix generator_matrix(const SimplicialSet& delta);

/// Row-style Hermite normal form H = U·M, U unimodular: pivots positive,
/// zeros below each pivot, entries above a pivot reduced into [0, pivot).
/// Rank-deficient input yields trailing zero rows.
IntegerMatrix hnf(const IntegerMatrix& m);

/// |det| of a square integer matrix (the lattice index for generators).
Coord abs_det(const IntegerMatrix& m);

/// Sorted gcds of the columns; invariant of the row lattice up to column
/// permutation.
std::vector<Coord> column_gcds(const IntegerMatrix& m);

/// Throws InvalidInput unless Δ is full-dimensional.
CanonicalLatticeKey canonical_key(const SimplicialSet& delta);

/// Same key computed straight from a square generator matrix.
CanonicalLatticeKey canonical_key(const IntegerMatrix& generator);

/// Same lattice up to column permutation. Cheap invariants (|det|, column
/// gcd multiset) are compared first.
bool equivalent(const SimplicialSet& a, const SimplicialSet& b);

/// Memoizing canonicalizer. The key only depends on the row lattice, which
/// the plain (unpermuted) HNF identifies, so each miss fills in the key for
/// every column-permuted HNF of the lattice at once. Not thread-safe: give
/// each worker its own instance.
class Canonicalizer {
 public:
  CanonicalLatticeKey key(const SimplicialSet& delta);
  CanonicalLatticeKey key(const IntegerMatrix& generator);

  std::size_t cache_size() const noexcept { return cache_.size(); }
  std::size_t misses() const noexcept { return misses_; }

 private:
  std::unordered_map<std::string, CanonicalLatticeKey> cache_;
  std::size_t misses_ = 0;
};

}  // namespace mms
