#include "mms/mms.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace mms {

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::H: return "H";
    case Classification::M: return "M";
    case Classification::Intermediate: return "INTERMEDIATE";
  }
  return "?";
}

Classification parse_classification(std::string_view s) {
  if (s == "H") return Classification::H;
  if (s == "M") return Classification::M;
  if (s == "INTERMEDIATE") return Classification::Intermediate;
  throw InvalidInput("unknown classification '" + std::string(s) + "'");
}

std::string HRatio::str() const { return value.get_num().get_str() + "/" + value.get_den().get_str(); }

std::string MmsResult::to_json() const {
  nlohmann::ordered_json j;
  j["delta"] = to_string(delta);
  j["mms_points"] = to_string(mms_points);
  j["conv_count"] = conv_count;
  j["floor_count"] = floor_count;
  j["classification"] = to_string(classification);
  j["h_ratio"] = h_ratio.str();
  j["h_counts"] = {h_ratio.numerator_count, h_ratio.denominator_count};
  j["both_bounds_equal"] = both_bounds_equal;
  return j.dump();
}

PointSet mms_fixed_point(const SimplicialSet& delta) {
  PointSet current = lattice_points(delta);
  while (true) {
    PointSet next = midpoint_set(current);
    next.insert(next.end(), delta.points().begin(), delta.points().end());
    sort_unique(next);
    if (next == current) return current;
    current = std::move(next);
  }
}

namespace {

// Is L[a] + L[b] == 2 * target for some a < a_end <= b_begin <= b? Two-pointer
// walk over the lex-sorted list; lex order respects addition, so a pair with
// that sum always straddles target.
bool pair_sum_across(const PointSet& L, const LatticePoint& target, std::size_t a_end, std::size_t b_begin) {
  if (a_end == 0 || b_begin >= L.size()) return false;
  const std::size_t n = target.dim();
  std::size_t a = 0, b = L.size() - 1;
  while (a < a_end && b >= b_begin) {
    int cmp = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const Coord s = L[a][t] + L[b][t], d = 2 * target[t];
      if (s != d) {
        cmp = s < d ? -1 : 1;
        break;
      }
    }
    if (cmp == 0) return true;
    if (cmp < 0) {
      ++a;
    } else {
      if (b == b_begin) break;
      --b;
    }
  }
  return false;
}

}  // namespace

bool is_list_midpoint(const PointSet& L, std::size_t index) { return pair_sum_across(L, L[index], index, index + 1); }

namespace {

// Short offsets v, one per ±v pair, whose parity matches `mask` (bit t set =
// coordinate t odd): odd entries ±1, even entries 0 or ±2. x ± v are both even
// exactly when v ≡ x (mod 2).
const std::vector<LatticePoint>& short_offsets(std::size_t n, unsigned mask) {
  constexpr std::size_t kKeep = 24;
  thread_local std::map<std::pair<std::size_t, unsigned>, std::vector<LatticePoint>> cache;
  auto [it, fresh] = cache.try_emplace({n, mask});
  if (!fresh) return it->second;
  std::vector<LatticePoint> out;
  LatticePoint v(n);
  auto rec = [&](auto& self, std::size_t t) -> void {
    if (t == n) {
      std::size_t f = 0;
      while (f < n && v[f] == 0) ++f;
      if (f < n && v[f] > 0) out.push_back(v);
      return;
    }
    static constexpr Coord kOdd[] = {-1, 1}, kEven[] = {0, -2, 2};
    const auto choices = (mask >> t) & 1u ? std::span<const Coord>(kOdd) : std::span<const Coord>(kEven);
    for (Coord c : choices) {
      v[t] = c;
      self(self, t + 1);
    }
  };
  rec(rec, 0);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.norm1() < b.norm1(); });
  if (out.size() > kKeep) out.resize(kKeep);
  it->second = std::move(out);
  return it->second;
}

// Occupancy grid over the bounding box of a point list. Used only to find a
// midpoint witness quickly; a miss always falls back to the exact walk.
class Occupancy {
 public:
  explicit Occupancy(const PointSet& pts) {
    if (pts.size() < 64) return;
    n_ = pts.front().dim();
    lo_ = hi_ = pts.front();
    for (const auto& p : pts)
      for (std::size_t t = 0; t < n_; ++t) {
        lo_[t] = std::min(lo_[t], p[t]);
        hi_[t] = std::max(hi_[t], p[t]);
      }
    std::size_t volume = 1;
    for (std::size_t t = n_; t-- > 0;) {
      stride_[t] = volume;
      volume *= static_cast<std::size_t>(hi_[t] - lo_[t] + 1);
      if (volume > 16 * pts.size() + 4096) return;
    }
    bits_.assign(volume, 0);
    for (const auto& p : pts) bits_[offset(p)] = 1;
  }

  bool active() const noexcept { return !bits_.empty(); }

  bool has(const LatticePoint& p) const noexcept {
    for (std::size_t t = 0; t < n_; ++t)
      if (p[t] < lo_[t] || p[t] > hi_[t]) return false;
    return bits_[offset(p)];
  }
  void erase(const LatticePoint& p) noexcept {
    if (active()) bits_[offset(p)] = 0;
  }

  // Some short v with x - v and x + v both present?
  bool short_witness(const LatticePoint& x) const {
    if (!active()) return false;
    unsigned mask = 0;
    for (std::size_t t = 0; t < n_; ++t) mask |= static_cast<unsigned>(x[t] & 1) << t;
    for (const auto& v : short_offsets(n_, mask))
      if (has(x - v) && has(x + v)) return true;
    return false;
  }

 private:
  std::size_t offset(const LatticePoint& p) const noexcept {
    std::size_t o = 0;
    for (std::size_t t = 0; t < n_; ++t) o += static_cast<std::size_t>(p[t] - lo_[t]) * stride_[t];
    return o;
  }

  std::size_t n_ = 0;
  LatticePoint lo_, hi_;
  std::array<std::size_t, kMaxDim> stride_{};
  std::vector<std::uint8_t> bits_;
};

PointSet removal_walk(const SimplicialSet& delta, PointSet L) {
  if (L.empty()) return L;
  Occupancy grid(L);
  std::size_t i = L.size() - 1;
  while (i != 0) {
    if (!delta.has_vertex(L[i]) && !grid.short_witness(L[i]) && !is_list_midpoint(L, i)) {
      grid.erase(L[i]);
      L.erase(L.begin() + static_cast<std::ptrdiff_t>(i));
      i = L.size() - 1;
    } else {
      --i;
    }
  }
  return L;
}

// core ∪ midpoints(core), keeping only candidates from `all` (every such
// midpoint is a lattice point of the hull). Both inputs lex-sorted.
PointSet with_midpoints(const PointSet& core, const PointSet& all) {
  if (core.size() < 2) return core;
  const Occupancy grid(core);
  PointSet out;
  out.reserve(all.size());
  std::size_t c = 0;
  for (const auto& x : all) {
    while (c < core.size() && core[c] < x) ++c;
    if (c < core.size() && core[c] == x) {
      out.push_back(x);
      continue;
    }
    if (grid.short_witness(x) || pair_sum_across(core, x, c, c)) out.push_back(x);
  }
  return out;
}

PointSet even_only(const PointSet& all) {
  PointSet out;
  for (const auto& p : all)
    if (is_even(p)) out.push_back(p);
  return out;
}

}  // namespace

PointSet mms_even_core(const SimplicialSet& delta) { return removal_walk(delta, even_lattice_points(delta)); }

PointSet mms_removal(const SimplicialSet& delta) {
  const PointSet all = SimplexFrame(delta).lattice_points();
  return with_midpoints(removal_walk(delta, even_only(all)), all);
}

Classification classify(const MmsResult& r) {
  const auto size = static_cast<std::int64_t>(r.mms_points.size());
  if (size == r.conv_count) return Classification::H;
  if (size == r.floor_count) return Classification::M;
  return Classification::Intermediate;
}

HRatio h_ratio(const MmsResult& r) {
  HRatio h;
  h.numerator_count = static_cast<std::int64_t>(r.mms_points.size()) - r.floor_count;
  h.denominator_count = r.conv_count - r.floor_count;
  if (h.denominator_count == 0) {
    h.value = 1;
  } else {
    h.value = Rational(static_cast<long>(h.numerator_count), static_cast<unsigned long>(h.denominator_count));
    h.value.canonicalize();
  }
  return h;
}

MmsResult compute_mms(const SimplicialSet& delta, MmsAlgorithm algorithm) {
  MmsResult r{delta, {}, 0, 0, Classification::H, {}, false};
  const PointSet all = SimplexFrame(delta).lattice_points();
  r.conv_count = static_cast<std::int64_t>(all.size());
  if (algorithm == MmsAlgorithm::Removal)
    r.mms_points = with_midpoints(removal_walk(delta, even_only(all)), all);
  else
    r.mms_points = mms_fixed_point(delta);

  PointSet floor = midpoint_set(delta.points());
  floor.insert(floor.end(), delta.points().begin(), delta.points().end());
  sort_unique(floor);
  r.floor_count = static_cast<std::int64_t>(floor.size());
  r.both_bounds_equal = r.floor_count == r.conv_count;
  r.classification = classify(r);
  r.h_ratio = h_ratio(r);
  return r;
}

}  // namespace mms
