#include "mms/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace mms {

// ---- LatticePoint ----------------------------------------------------------

LatticePoint::LatticePoint(std::size_t dim) {
  if (dim > kMaxDim) throw InvalidInput("dimension " + std::to_string(dim) + " exceeds maximum " + std::to_string(kMaxDim));
  dim_ = static_cast<std::uint8_t>(dim);
}

LatticePoint::LatticePoint(std::initializer_list<Coord> coords) : LatticePoint(coords.size()) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

LatticePoint::LatticePoint(std::span<const Coord> coords) : LatticePoint(coords.size()) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Coord LatticePoint::norm1() const noexcept {
  Coord s = 0;
  for (std::size_t i = 0; i < dim_; ++i) s += c_[i] < 0 ? -c_[i] : c_[i];
  return s;
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

bool operator==(const LatticePoint& a, const LatticePoint& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) noexcept {
  const std::size_t n = std::min(a.dim_, b.dim_);
  for (std::size_t i = 0; i < n; ++i)
    if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
  return a.dim_ <=> b.dim_;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ p.dim();
  for (Coord c : p.coords()) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

void sort_unique(PointSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool set_contains(const PointSet& sorted, const LatticePoint& p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

bool is_subset(const PointSet& sorted_sub, const PointSet& sorted_super) {
  return std::includes(sorted_super.begin(), sorted_super.end(), sorted_sub.begin(), sorted_sub.end());
}

// ---- SimplicialSet ---------------------------------------------------------

bool affinely_independent(std::span<const LatticePoint> points) {
  if (points.empty()) return false;
  const std::size_t n = points.front().dim();
  EchelonBasis basis(n);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const LatticePoint d = points[i] - points[0];
    if (!basis.add(d.coords())) return false;
  }
  return true;
}

SimplicialSet::SimplicialSet(std::vector<LatticePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("simplicial set must be nonempty");
  const std::size_t n = points_.front().dim();
  if (n == 0) throw InvalidInput("points must have at least one coordinate");
  for (const auto& p : points_) {
    if (p.dim() != n) throw InvalidInput("dimension mismatch in simplicial set");
    if (!is_even(p)) throw InvalidInput("point " + to_string(p) + " is not even");
  }
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end())
    throw InvalidInput("duplicate vertex in simplicial set");
  if (points_.size() > n + 1 || !affinely_independent(points_))
    throw InvalidInput("points are not affinely independent");
}

bool RationalCoeffs::nonnegative() const {
  return std::all_of(lambda.begin(), lambda.end(), [](const Rational& l) { return sgn(l) >= 0; });
}

bool RationalCoeffs::strictly_positive() const {
  return std::all_of(lambda.begin(), lambda.end(), [](const Rational& l) { return sgn(l) > 0; });
}

// ---- text form -------------------------------------------------------------

std::string to_string(const LatticePoint& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

std::string to_string(const PointSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ';';
    out += to_string(s[i]);
  }
  return out;
}

std::string to_string(const SimplicialSet& s) { return to_string(s.points()); }

namespace {

std::string strip_decoration(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '(' && ch != ')' && ch != '[' && ch != ']') out += ch;
  return out;
}

LatticePoint parse_clean_point(std::string_view s) {
  if (s.empty()) throw InvalidInput("empty point");
  std::vector<Coord> coords;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view tok = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (tok.empty()) throw InvalidInput("empty coordinate in '" + std::string(s) + "'");
    std::string_view digits = tok;
    if (digits.front() == '+') digits.remove_prefix(1);
    Coord v{};
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      throw InvalidInput("bad coordinate '" + std::string(tok) + "'");
    coords.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return LatticePoint(std::span<const Coord>(coords));
}

}  // namespace

LatticePoint parse_point(std::string_view text) { return parse_clean_point(strip_decoration(text)); }

PointSet parse_points(std::string_view text) {
  const std::string s = strip_decoration(text);
  PointSet out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t semi = s.find(';', pos);
    out.push_back(parse_clean_point(std::string_view(s).substr(pos, semi == std::string::npos ? std::string::npos : semi - pos)));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return out;
}

SimplicialSet parse_simplicial_set(std::string_view text) { return SimplicialSet(parse_points(text)); }

// ---- operations ------------------------------------------------------------

bool is_even(const LatticePoint& p) noexcept {
  for (Coord c : p.coords())
    if (c % 2 != 0) return false;
  return true;
}

PointSet midpoint_set(std::span<const LatticePoint> points) {
  PointSet even;
  for (const auto& p : points) {
    if (p.dim() != points.front().dim()) throw InvalidInput("dimension mismatch in midpoint_set");
    if (is_even(p)) even.push_back(p);
  }
  sort_unique(even);
  PointSet mids;
  mids.reserve(even.size() * (even.size() - (even.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < even.size(); ++i)
    for (std::size_t j = i + 1; j < even.size(); ++j) {
      LatticePoint m = even[i] + even[j];
      for (std::size_t t = 0; t < m.dim(); ++t) m[t] /= 2;
      mids.push_back(m);
    }
  sort_unique(mids);
  return mids;
}

std::optional<RationalCoeffs> barycentric(const SimplicialSet& delta, std::span<const Rational> p) {
  const std::size_t n = delta.ambient_dim();
  const std::size_t k = delta.simplex_dim();
  if (p.size() != n) throw InvalidInput("dimension mismatch in barycentric solve");
  const auto& v = delta.points();

  // Augmented system D * mu = p - v0 with D = [v1-v0 ... vk-v0], n x (k+1).
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = Rational(v[c + 1][r] - v[0][r]);
    a[r][k] = p[r] - Rational(v[0][r]);
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < k && row < n; ++c) {
    std::size_t sel = row;
    while (sel < n && sgn(a[sel][c]) == 0) ++sel;
    if (sel == n) continue;
    std::swap(a[sel], a[row]);
    const Rational piv = a[row][c];
    for (std::size_t j = c; j <= k; ++j) a[row][j] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[row][j];
    }
    pivot_col.push_back(c);
    ++row;
  }
  // Vertices are affinely independent, so every column is a pivot.
  for (std::size_t r = row; r < n; ++r)
    if (sgn(a[r][k]) != 0) return std::nullopt;

  RationalCoeffs out;
  out.lambda.assign(k + 1, Rational(0));
  Rational rest(1);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) {
    out.lambda[pivot_col[i] + 1] = a[i][k];
    rest -= a[i][k];
  }
  out.lambda[0] = rest;
  return out;
}

std::optional<RationalCoeffs> barycentric(const SimplicialSet& delta, const LatticePoint& p) {
  std::vector<Rational> q;
  q.reserve(p.dim());
  for (Coord c : p.coords()) q.emplace_back(static_cast<long>(c));
  return barycentric(delta, q);
}

bool contains(const SimplicialSet& delta, const LatticePoint& p) {
  auto bc = barycentric(delta, p);
  return bc && bc->nonnegative();
}

bool contains(const SimplicialSet& delta, std::span<const Rational> p) {
  auto bc = barycentric(delta, p);
  return bc && bc->nonnegative();
}

bool contains_strictly(const SimplicialSet& delta, const LatticePoint& p) {
  auto bc = barycentric(delta, p);
  return bc && bc->strictly_positive();
}

// ---- SimplexFrame ----------------------------------------------------------

namespace {

using I128 = __int128;

I128 floor_div128(I128 a, I128 b) {
  I128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

I128 ceil_div128(I128 a, I128 b) { return -floor_div128(-a, b); }

// Fraction-free Gauss-Jordan on [A | I]. On success returns d != 0 and
// R = d * A^{-1} (integral). Every division is checked for exactness and
// the result is verified, so a false return only means "use the slow path".
bool integer_inverse(const std::vector<Coord>& a, std::size_t k, Coord& d_out, std::vector<Coord>& r_out) {
  const std::size_t w = 2 * k;
  std::vector<I128> m(k * w, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i * w + j] = a[i * k + j];
    m[i * w + k + i] = 1;
  }
  const I128 limit = static_cast<I128>(1) << 100;
  I128 prev = 1;
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t sel = p;
    while (sel < k && m[sel * w + p] == 0) ++sel;
    if (sel == k) return false;
    if (sel != p)
      for (std::size_t j = 0; j < w; ++j) std::swap(m[sel * w + j], m[p * w + j]);
    const I128 piv = m[p * w + p];
    for (std::size_t i = 0; i < k; ++i) {
      if (i == p) continue;
      const I128 f = m[i * w + p];
      for (std::size_t j = 0; j < w; ++j) {
        if (j == p) continue;
        const I128 num = piv * m[i * w + j] - f * m[p * w + j];
        if (num % prev != 0) return false;
        const I128 v = num / prev;
        if (v > limit || v < -limit) return false;
        m[i * w + j] = v;
      }
      m[i * w + p] = 0;
    }
    prev = piv;
  }
  // Bareiss-Jordan leaves every diagonal entry equal to the last pivot.
  const I128 d = m[(k - 1) * w + (k - 1)];
  for (std::size_t i = 0; i < k; ++i)
    if (m[i * w + i] != d) return false;
  try {
    d_out = narrow(d);
    r_out.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) r_out[i * k + j] = narrow(m[i * w + k + j]);
  } catch (const std::overflow_error&) {
    return false;
  }
  // Verify A * R == d * I.
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      I128 s = 0;
      for (std::size_t t = 0; t < k; ++t) s += static_cast<I128>(a[i * k + t]) * r_out[t * k + j];
      if (s != (i == j ? static_cast<I128>(d_out) : 0)) return false;
    }
  return true;
}

// Slow exact path over Q: R = d * A^{-1} with d = lcm of denominators.
void rational_inverse(const std::vector<Coord>& a, std::size_t k, Coord& d_out, std::vector<Coord>& r_out) {
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(2 * k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = Rational(static_cast<long>(a[i * k + j]));
    m[i][k + i] = 1;
  }
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t sel = p;
    while (sgn(m[sel][p]) == 0) ++sel;
    std::swap(m[sel], m[p]);
    const Rational piv = m[p][p];
    for (auto& x : m[p]) x /= piv;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == p || sgn(m[i][p]) == 0) continue;
      const Rational f = m[i][p];
      for (std::size_t j = 0; j < 2 * k; ++j) m[i][j] -= f * m[p][j];
    }
  }
  mpz_class d = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m[i][k + j].get_den_mpz_t());
  if (!d.fits_slong_p()) throw std::overflow_error("simplex too large for integer frame");
  d_out = d.get_si();
  r_out.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Rational v = m[i][k + j] * d;
      if (!v.get_num().fits_slong_p()) throw std::overflow_error("simplex too large for integer frame");
      r_out[i * k + j] = v.get_num().get_si();
    }
}

}  // namespace

SimplexFrame::SimplexFrame(const SimplicialSet& delta)
    : dim_(delta.ambient_dim()), lo_(delta.ambient_dim()), hi_(delta.ambient_dim()) {
  const std::size_t n = dim_;
  const std::size_t k = delta.simplex_dim();
  const auto& v = delta.points();
  const LatticePoint& v0 = v[0];

  for (std::size_t t = 0; t < n; ++t) {
    lo_[t] = hi_[t] = v0[t];
    for (const auto& p : v) {
      lo_[t] = std::min(lo_[t], p[t]);
      hi_[t] = std::max(hi_[t], p[t]);
    }
  }

  // D[r][i] = (v_{i+1} - v_0)[r]; pick k independent rows as pivots.
  std::vector<Coord> dmat(n * k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < k; ++i) dmat[r * k + i] = checked_sub(v[i + 1][r], v0[r]);
  std::vector<std::size_t> pivots, others;
  {
    EchelonBasis basis(k);
    for (std::size_t r = 0; r < n; ++r) {
      if (pivots.size() < k && k > 0 && basis.add(std::span<const Coord>(&dmat[r * k], k)))
        pivots.push_back(r);
      else
        others.push_back(r);
    }
  }

  Coord d = 1;
  std::vector<Coord> rinv;
  if (k > 0) {
    std::vector<Coord> dp(k * k);
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t i = 0; i < k; ++i) dp[q * k + i] = dmat[pivots[q] * k + i];
    if (!integer_inverse(dp, k, d, rinv)) rational_inverse(dp, k, d, rinv);
    if (d < 0) {
      d = -d;
      for (Coord& x : rinv) x = -x;
    }
  }

  // lambda_i * d = sum_q R[i][q] (x_{P_q} - v0_{P_q}) >= 0, i = 1..k
  std::vector<I128> colsum(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    Row row;
    I128 c = 0;
    for (std::size_t q = 0; q < k; ++q) {
      const Coord rq = rinv[i * k + q];
      row.a[pivots[q]] = rq;
      c += static_cast<I128>(rq) * v0[pivots[q]];
      colsum[q] += rq;
    }
    row.c = narrow(c);
    ineq_.push_back(row);
  }
  // lambda_0 * d = d - sum_i lambda_i * d >= 0
  {
    Row row;
    I128 c = -static_cast<I128>(d);
    for (std::size_t q = 0; q < k; ++q) {
      row.a[pivots[q]] = narrow(-colsum[q]);
      c -= colsum[q] * v0[pivots[q]];
    }
    row.c = narrow(c);
    ineq_.push_back(row);
  }
  // Affine hull: for each non-pivot row r, sum_i D[r][i] lambda_i d = d y_r.
  for (std::size_t r : others) {
    Row row;
    I128 c = -static_cast<I128>(d) * v0[r];
    for (std::size_t q = 0; q < k; ++q) {
      I128 e = 0;
      for (std::size_t i = 0; i < k; ++i) e += static_cast<I128>(dmat[r * k + i]) * rinv[i * k + q];
      row.a[pivots[q]] = narrow(e);
      c += e * v0[pivots[q]];
    }
    row.a[r] = checked_sub(row.a[r], d);
    row.c = narrow(c);
    eq_.push_back(row);
  }
}

bool SimplexFrame::contains(const LatticePoint& p) const {
  for (const auto& row : eq_) {
    I128 s = -static_cast<I128>(row.c);
    for (std::size_t t = 0; t < dim_; ++t) s += static_cast<I128>(row.a[t]) * p[t];
    if (s != 0) return false;
  }
  for (const auto& row : ineq_) {
    I128 s = -static_cast<I128>(row.c);
    for (std::size_t t = 0; t < dim_; ++t) s += static_cast<I128>(row.a[t]) * p[t];
    if (s < 0) return false;
  }
  return true;
}

bool SimplexFrame::contains_strictly(const LatticePoint& p) const {
  if (!contains(p)) return false;
  for (const auto& row : ineq_) {
    I128 s = -static_cast<I128>(row.c);
    for (std::size_t t = 0; t < dim_; ++t) s += static_cast<I128>(row.a[t]) * p[t];
    if (s == 0) return false;
  }
  return true;
}

PointSet SimplexFrame::lattice_points() const {
  const std::size_t n = dim_;
  std::vector<const Row*> rows;
  for (const auto& r : eq_) rows.push_back(&r);
  for (const auto& r : ineq_) rows.push_back(&r);
  const std::size_t neq = eq_.size();
  const std::size_t nr = rows.size();

  // rest_min/max[r * (n+1) + j]: extreme of sum_{t >= j} a_t x_t over the box.
  std::vector<I128> rest_min(nr * (n + 1), 0), rest_max(nr * (n + 1), 0);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t j = n; j-- > 0;) {
      const I128 a = rows[r]->a[j];
      const I128 x1 = a * lo_[j], x2 = a * hi_[j];
      rest_min[r * (n + 1) + j] = rest_min[r * (n + 1) + j + 1] + std::min(x1, x2);
      rest_max[r * (n + 1) + j] = rest_max[r * (n + 1) + j + 1] + std::max(x1, x2);
    }

  PointSet out;
  LatticePoint x(n);
  std::vector<I128> partial(nr * (n + 1), 0);  // partial[r*(n+1)+j] = sum_{t<j} a_t x_t - c
  for (std::size_t r = 0; r < nr; ++r) partial[r * (n + 1)] = -static_cast<I128>(rows[r]->c);

  // Feasible interval for x_j given x_0..x_{j-1}; false if empty. At the last
  // coordinate the rest terms vanish, so the interval is exact.
  auto interval = [&](std::size_t j, I128& lo, I128& hi) {
    lo = lo_[j];
    hi = hi_[j];
    for (std::size_t r = 0; r < nr; ++r) {
      const I128 a = rows[r]->a[j];
      const I128 s = partial[r * (n + 1) + j];
      const I128 rmin = rest_min[r * (n + 1) + j + 1], rmax = rest_max[r * (n + 1) + j + 1];
      if (r < neq) {
        // s + a x + [rmin, rmax] must contain 0, i.e. a x in [tlo, thi].
        const I128 tlo = -s - rmax, thi = -s - rmin;
        if (a == 0) {
          if (tlo > 0 || thi < 0) return false;
        } else if (a > 0) {
          lo = std::max(lo, ceil_div128(tlo, a));
          hi = std::min(hi, floor_div128(thi, a));
        } else {
          lo = std::max(lo, ceil_div128(thi, a));
          hi = std::min(hi, floor_div128(tlo, a));
        }
      } else {
        // s + a x + rmax >= 0, i.e. a x >= t.
        const I128 t = -s - rmax;
        if (a == 0) {
          if (t > 0) return false;
        } else if (a > 0) {
          lo = std::max(lo, ceil_div128(t, a));
        } else {
          hi = std::min(hi, floor_div128(t, a));
        }
      }
      if (lo > hi) return false;
    }
    return true;
  };

  auto descend = [&](auto& self, std::size_t j) -> void {
    I128 lo, hi;
    if (!interval(j, lo, hi)) return;
    if (j + 1 == n) {
      for (I128 val = lo; val <= hi; ++val) {
        x[j] = static_cast<Coord>(val);
        out.push_back(x);
      }
      return;
    }
    for (I128 val = lo; val <= hi; ++val) {
      x[j] = static_cast<Coord>(val);
      for (std::size_t r = 0; r < nr; ++r)
        partial[r * (n + 1) + j + 1] = partial[r * (n + 1) + j] + static_cast<I128>(rows[r]->a[j]) * x[j];
      self(self, j + 1);
    }
  };
  descend(descend, 0);
  return out;
}

PointSet lattice_points(const SimplicialSet& delta) { return SimplexFrame(delta).lattice_points(); }

PointSet even_lattice_points(const SimplicialSet& delta) {
  PointSet all = lattice_points(delta);
  PointSet out;
  for (const auto& p : all)
    if (is_even(p)) out.push_back(p);
  return out;
}

Coord max_degree(const SimplicialSet& delta) noexcept {
  Coord m = 0;
  for (const auto& p : delta.points()) m = std::max(m, p.norm1());
  return m;
}

bool is_trellis(std::span<const LatticePoint> points) noexcept {
  if (points.empty()) return true;
  const Coord d = points.front().norm1();
  return std::all_of(points.begin(), points.end(), [d](const LatticePoint& p) { return p.norm1() == d; });
}

}  // namespace mms
