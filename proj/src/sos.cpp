#include "mms/sos.hpp"

#include <mutex>

#include <json.hpp>

namespace mms {

namespace {

Parity parity_of(const LatticePoint& p) { return is_even(p) ? Parity::Even : Parity::Odd; }

void require_interior(const SimplicialSet& delta, const LatticePoint& beta) {
  if (beta.dim() != delta.ambient_dim()) throw InvalidInput("exponent " + to_string(beta) + " has wrong dimension");
  if (!contains_strictly(delta, beta))
    throw InvalidInput("exponent " + to_string(beta) + " is not strictly inside conv(" + to_string(delta) + ")");
}

std::shared_ptr<const MmsResult> mms_of(const SimplicialSet& delta, MmsCache* cache) {
  if (cache) return cache->get(delta);
  return std::make_shared<const MmsResult>(compute_mms(delta));
}

}  // namespace

CircuitSupport::CircuitSupport(SimplicialSet d, LatticePoint b) : delta(std::move(d)), beta(b) {
  require_interior(delta, beta);
}

std::string_view to_string(CoeffSign s) noexcept { return s == CoeffSign::Neg ? "NEG" : "POS"; }
std::string_view to_string(Parity p) noexcept { return p == Parity::Even ? "EVEN" : "ODD"; }

CoeffSign parse_coeff_sign(std::string_view s) {
  if (s == "NEG" || s == "neg" || s == "-") return CoeffSign::Neg;
  if (s == "POS" || s == "pos" || s == "+") return CoeffSign::Pos;
  throw InvalidInput("unknown coefficient sign '" + std::string(s) + "'");
}

InnerTerm make_term(LatticePoint beta, CoeffSign sign) { return InnerTerm{beta, sign, parity_of(beta)}; }

SimplexSupportedPoly::SimplexSupportedPoly(SimplicialSet d, std::vector<InnerTerm> t)
    : delta(std::move(d)), terms(std::move(t)) {
  if (!delta.full_dimensional()) throw InvalidInput("Newton simplex must be full-dimensional");
  if (!delta.has_vertex(LatticePoint(delta.ambient_dim()))) throw InvalidInput("Newton simplex must have the origin as a vertex");
  for (const auto& term : terms) {
    require_interior(delta, term.beta);
    if (term.parity != parity_of(term.beta))
      throw InvalidInput("parity of " + to_string(term.beta) + " given as " + std::string(to_string(term.parity)));
  }
}

// ---- MmsCache --------------------------------------------------------------

std::shared_ptr<const MmsResult> MmsCache::get(const SimplicialSet& delta) {
  const std::string key = to_string(delta);
  {
    std::shared_lock lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  auto fresh = std::make_shared<const MmsResult>(compute_mms(delta));
  std::unique_lock lock(mu_);
  return memo_.try_emplace(key, std::move(fresh)).first->second;
}

std::size_t MmsCache::size() const {
  std::shared_lock lock(mu_);
  return memo_.size();
}

// ---- decisions -------------------------------------------------------------

std::string SosDecision::to_json() const {
  nlohmann::ordered_json j;
  j["verdict"] = verdict;
  auto w = nlohmann::ordered_json::array();
  for (const auto& t : witnesses)
    w.push_back({{"beta", to_string(t.beta)}, {"in_mms", t.in_mms}, {"satisfied", t.satisfied}});
  j["terms"] = w;
  if (mms) {
    j["classification"] = to_string(mms->classification);
    j["h_ratio"] = mms->h_ratio.str();
    j["mms_points"] = to_string(mms->mms_points);
  }
  return j.dump();
}

SosDecision decide_circuit(const CircuitSupport& c, MmsCache* cache) {
  SosDecision d;
  d.mms = mms_of(c.delta, cache);
  const bool in = set_contains(d.mms->mms_points, c.beta);
  d.witnesses.push_back({c.beta, in, in});
  d.verdict = in;
  return d;
}

bool circuit_is_sos(const CircuitSupport& c, MmsCache* cache) { return decide_circuit(c, cache).verdict; }

SosDecision decide_sonc_simplex(const SimplexSupportedPoly& f, MmsCache* cache) {
  for (const auto& t : f.terms)
    if (t.sign == CoeffSign::Pos && t.parity == Parity::Even)
      throw InvalidInput("term " + to_string(t.beta) +
                         " is even with positive coefficient; the MMS criterion does not decide this case");
  SosDecision d;
  d.mms = mms_of(f.delta, cache);
  d.verdict = true;
  for (const auto& t : f.terms) {
    const bool in = set_contains(d.mms->mms_points, t.beta);
    d.witnesses.push_back({t.beta, in, in});
    d.verdict = d.verdict && in;
  }
  return d;
}

bool sonc_simplex_is_sos(const SimplexSupportedPoly& f, MmsCache* cache) { return decide_sonc_simplex(f, cache).verdict; }

SosDecision decide_sos_bound_exact(const SimplexSupportedPoly& f, MmsCache* cache) {
  SosDecision d;
  d.mms = mms_of(f.delta, cache);
  d.verdict = true;
  for (const auto& t : f.terms) {
    const bool in = set_contains(d.mms->mms_points, t.beta);
    const bool ok = in || (t.parity == Parity::Even && t.sign == CoeffSign::Pos);
    d.witnesses.push_back({t.beta, in, ok});
    d.verdict = d.verdict && ok;
  }
  return d;
}

bool sos_bound_is_exact(const SimplexSupportedPoly& f, MmsCache* cache) { return decide_sos_bound_exact(f, cache).verdict; }

std::vector<InnerTerm> parse_terms_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("terms: ") + e.what());
  }
  if (j.is_object() && j.contains("terms")) j = j["terms"];
  if (!j.is_array()) throw InvalidInput("terms must be a JSON array");
  std::vector<InnerTerm> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("beta") || !e.contains("sign")) throw InvalidInput("each term needs beta and sign");
    LatticePoint beta(1);
    if (e["beta"].is_string()) {
      beta = parse_point(e["beta"].get<std::string>());
    } else if (e["beta"].is_array()) {
      std::vector<Coord> c;
      for (const auto& x : e["beta"]) {
        if (!x.is_number_integer()) throw InvalidInput("beta entries must be integers");
        c.push_back(x.get<Coord>());
      }
      beta = LatticePoint(std::span<const Coord>(c));
    } else {
      throw InvalidInput("beta must be a string or an array");
    }
    InnerTerm t = make_term(beta, parse_coeff_sign(e["sign"].get<std::string>()));
    if (e.contains("parity")) {
      const auto p = e["parity"].get<std::string>();
      if (p == "EVEN") t.parity = Parity::Even;
      else if (p == "ODD") t.parity = Parity::Odd;
      else throw InvalidInput("unknown parity '" + p + "'");
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace mms
