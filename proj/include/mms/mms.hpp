#pragma once

#include <cstdint>
#include <string>

#include "mms/lattice.hpp"

namespace mms {

enum class Classification { H, M, Intermediate };

std::string_view to_string(Classification c) noexcept;
Classification parse_classification(std::string_view s);

/// Density of the MMS strictly between its two bounds. `value` is reduced;
/// the counts are kept as computed. With a zero denominator count the
/// value is 1.
struct HRatio {
  std::int64_t numerator_count = 0;
  std::int64_t denominator_count = 0;
  Rational value{1};

  /// "num/den" of the reduced value.
  std::string str() const;
};

struct MmsResult {
  SimplicialSet delta;
  PointSet mms_points;
  std::int64_t conv_count = 0;   // #(conv(delta) ∩ Z^n)
  std::int64_t floor_count = 0;  // #(delta ∪ Mid(delta))
  Classification classification = Classification::H;
  HRatio h_ratio;
  // Both bounds coincide; classification is reported as H.
  bool both_bounds_equal = false;

  /// One JSON object on a single line (no trailing newline).
  std::string to_json() const;
};

enum class MmsAlgorithm { Removal, FixedPoint };

/// Iterate Δ^0 = conv ∩ Z^n, Δ^i = Mid(Δ^{i-1}) ∪ Δ until stable.
PointSet mms_fixed_point(const SimplicialSet& delta);

/// Removal over the lex-ordered even points of conv(Δ): walk from the tail
/// toward the head, drop any point that is neither a vertex nor a midpoint
/// of the current list, restart from the tail after each drop. Returns
/// L ∪ Mid(L).
PointSet mms_removal(const SimplicialSet& delta);

/// Even part of Δ* as the removal walk leaves it (lex-sorted).
PointSet mms_even_core(const SimplicialSet& delta);

/// True iff sorted_even[index] = (s + t)/2 for distinct s, t in the list.
/// Two-pointer scan exploiting that lex order is compatible with addition.
bool is_list_midpoint(const PointSet& sorted_even, std::size_t index);

Classification classify(const MmsResult& r);
HRatio h_ratio(const MmsResult& r);

/// Full result: Δ*, both bound sizes, classification and h-ratio.
MmsResult compute_mms(const SimplicialSet& delta, MmsAlgorithm algorithm = MmsAlgorithm::Removal);

}  // namespace mms
