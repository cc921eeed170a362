#pragma once

#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mms/mms.hpp"

namespace mms {

/// Support of a circuit polynomial: even simplex vertices and one exponent
/// in the relative interior of their convex hull.
struct CircuitSupport {
  SimplicialSet delta;
  LatticePoint beta;

  /// Throws InvalidInput unless beta lies strictly inside conv(delta).
  CircuitSupport(SimplicialSet delta, LatticePoint beta);
};

enum class CoeffSign { Neg, Pos };
enum class Parity { Even, Odd };

std::string_view to_string(CoeffSign s) noexcept;
std::string_view to_string(Parity p) noexcept;
CoeffSign parse_coeff_sign(std::string_view s);

struct InnerTerm {
  LatticePoint beta;
  CoeffSign sign = CoeffSign::Neg;
  Parity parity = Parity::Even;
};

/// Polynomial with simplex Newton polytope: vertex terms plus inner terms
/// whose exponents are interior lattice points.
struct SimplexSupportedPoly {
  SimplicialSet delta;
  std::vector<InnerTerm> terms;

  /// Requires delta full-dimensional with the origin as a vertex, every beta
  /// strictly interior and each term's parity matching its beta.
  SimplexSupportedPoly(SimplicialSet delta, std::vector<InnerTerm> terms);
};

/// Term with parity read off beta.
InnerTerm make_term(LatticePoint beta, CoeffSign sign);

/// Process-wide MMS memo keyed by the vertex set. Concurrent lookups, writes
/// serialized.
class MmsCache {
 public:
  std::shared_ptr<const MmsResult> get(const SimplicialSet& delta);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const MmsResult>> memo_;
};

struct TermWitness {
  LatticePoint beta;
  bool in_mms = false;
  // The term does not prevent the verdict (for sos_bound_is_exact this
  // also accepts even exponents with positive coefficient).
  bool satisfied = false;
};

/// Verdict plus the per-exponent membership facts it rests on.
struct SosDecision {
  bool verdict = false;
  std::vector<TermWitness> witnesses;
  std::shared_ptr<const MmsResult> mms;

  std::string to_json() const;
};

/// A nonnegative circuit polynomial with this support is a sum of squares
/// iff beta is in the MMS of delta.
SosDecision decide_circuit(const CircuitSupport& c, MmsCache* cache = nullptr);
bool circuit_is_sos(const CircuitSupport& c, MmsCache* cache = nullptr);

/// For a SONC polynomial whose every inner term has a negative coefficient
/// or an odd exponent: SOS iff every inner exponent lies in the MMS. Throws
/// InvalidInput for an even exponent with positive coefficient, where the
/// criterion does not decide.
SosDecision decide_sonc_simplex(const SimplexSupportedPoly& f, MmsCache* cache = nullptr);
bool sonc_simplex_is_sos(const SimplexSupportedPoly& f, MmsCache* cache = nullptr);

/// Whether the SOS lower bound equals the circuit bound: every inner term is
/// in the MMS, or is even with positive coefficient.
SosDecision decide_sos_bound_exact(const SimplexSupportedPoly& f, MmsCache* cache = nullptr);
bool sos_bound_is_exact(const SimplexSupportedPoly& f, MmsCache* cache = nullptr);

/// Parses `[{"beta": "1,1" | [1,1], "sign": "NEG" | "POS", "parity": optional}]`.
std::vector<InnerTerm> parse_terms_json(std::string_view text);

}  // namespace mms
