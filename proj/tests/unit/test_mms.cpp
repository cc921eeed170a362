#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "mms/mms.hpp"

using namespace mms;

namespace {

SimplicialSet S(std::initializer_list<LatticePoint> pts) { return SimplicialSet(std::vector<LatticePoint>(pts)); }

PointSet without(PointSet all, const PointSet& drop) {
  std::erase_if(all, [&](const LatticePoint& p) { return set_contains(drop, p); });
  return all;
}

std::vector<oracle::Pt> as_pts(const PointSet& s) {
  std::vector<oracle::Pt> v;
  for (const auto& p : s) v.push_back(oracle::pt(p));
  return v;
}

}  // namespace

TEST_CASE("Motzkin triangle is an M-simplex") {
  auto d = S({{0, 0}, {2, 4}, {4, 2}});
  const PointSet want{{0, 0}, {1, 2}, {2, 1}, {2, 4}, {3, 3}, {4, 2}};
  CHECK(mms_fixed_point(d) == want);
  CHECK(mms_removal(d) == want);
  auto r = compute_mms(d);
  CHECK(r.conv_count == 10);
  CHECK(r.floor_count == 6);
  CHECK(r.classification == Classification::M);
  CHECK(r.h_ratio.value == 0);
  CHECK(r.h_ratio.numerator_count == 0);
  CHECK(r.h_ratio.denominator_count == 4);
  CHECK_FALSE(r.both_bounds_equal);
}

TEST_CASE("scaled standard triangle is an H-simplex") {
  auto d = S({{0, 0}, {4, 0}, {0, 4}});
  CHECK(mms_fixed_point(d) == lattice_points(d));
  auto r = compute_mms(d);
  CHECK(r.mms_points.size() == 15);
  CHECK(r.classification == Classification::H);
  CHECK(r.h_ratio.value == 1);
  CHECK(r.h_ratio.numerator_count == 9);
  CHECK(r.h_ratio.denominator_count == 9);
}

TEST_CASE("tetrahedron missing its centre") {
  auto d = S({{0, 0, 0}, {0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
  const PointSet want = without(lattice_points(d), {{1, 1, 1}});
  CHECK(mms_fixed_point(d) == want);
  CHECK(mms_removal(d) == want);
  auto r = compute_mms(d);
  CHECK(r.classification == Classification::M);
  CHECK(r.h_ratio.numerator_count == 0);
  CHECK(r.h_ratio.denominator_count == 1);
}

TEST_CASE("intermediate simplex in four dimensions") {
  auto d = S({{0, 0, 0, 0}, {0, 0, 0, 4}, {0, 2, 2, 0}, {2, 0, 2, 0}, {2, 2, 0, 0}});
  auto all = lattice_points(d);
  CHECK(all.size() == 22);
  auto r = compute_mms(d);
  CHECK(r.mms_points == without(all, {{1, 1, 1, 0}, {1, 1, 1, 1}}));
  CHECK(r.classification == Classification::Intermediate);
}

TEST_CASE("only one point missing from a non-normal simplex") {
  auto d = S({{0, 0, 0}, {4, 0, 0}, {0, 6, 0}, {0, 0, 10}});
  auto r = compute_mms(d);
  CHECK(r.mms_points == without(lattice_points(d), {{1, 2, 4}}));
}

TEST_CASE("equal bounds resolve to H with the flag set") {
  auto d = S({{0, 0}, {2, 0}, {0, 2}});
  auto r = compute_mms(d);
  CHECK(r.conv_count == r.floor_count);
  CHECK(r.both_bounds_equal);
  CHECK(r.classification == Classification::H);
  CHECK(r.h_ratio.value == 1);
  CHECK(r.h_ratio.denominator_count == 0);

  auto single = compute_mms(S({{2, 2}}));
  CHECK(single.mms_points == PointSet{{2, 2}});
  CHECK(single.classification == Classification::H);
}

TEST_CASE("list midpoint test") {
  PointSet l{{0, 0}, {2, 2}, {2, 4}, {4, 2}};
  CHECK_FALSE(is_list_midpoint(l, 1));
  CHECK_FALSE(is_list_midpoint(l, 0));
  PointSet k{{0, 4}, {2, 2}, {2, 4}, {4, 0}};
  CHECK(is_list_midpoint(k, 1));
  PointSet m{{0, 0}, {2, 2}, {4, 4}};
  CHECK(is_list_midpoint(m, 1));
  CHECK_FALSE(is_list_midpoint(m, 2));
}

TEST_CASE("removal, fixed point and the set-based oracle agree") {
  std::mt19937_64 rng(21);
  for (std::size_t n = 2; n <= 3; ++n) {
    std::uniform_int_distribution<Coord> u(0, n == 2 ? 4 : 3);
    for (int t = 0; t < 60; ++t) {
      std::vector<LatticePoint> pts{LatticePoint(n)};
      for (std::size_t i = 0; i < n; ++i) {
        LatticePoint p(n);
        for (std::size_t j = 0; j < n; ++j) p[j] = 2 * u(rng);
        pts.push_back(p);
      }
      if (!affinely_independent(pts)) continue;
      SimplicialSet d(pts);
      std::vector<oracle::Pt> v;
      for (const auto& p : d.points()) v.push_back(oracle::pt(p));
      const auto ref = oracle::mms(v);
      const auto fp = mms_fixed_point(d);
      CHECK(as_pts(fp) == std::vector<oracle::Pt>(ref.begin(), ref.end()));
      CHECK(mms_removal(d) == fp);
    }
  }
}

TEST_CASE("removal matches fixed point on large simplices") {
  // big enough for the occupancy-grid shortcut; non-H ones exercise the exact fallback
  std::vector<SimplicialSet> cases{
      S({{0, 0, 0, 0}, {0, 12, 8, 2}, {0, 12, 0, 10}, {10, 10, 2, 12}, {0, 0, 10, 12}}),
      S({{0, 0, 0, 0}, {0, 12, 12, 0}, {12, 12, 12, 12}, {2, 0, 6, 6}, {0, 12, 2, 0}}),
      S({{0, 0}, {60, 0}, {0, 60}}),
  };
  std::mt19937_64 rng(8);
  for (std::size_t n = 2; n <= 3; ++n) {
    std::uniform_int_distribution<Coord> u(0, n == 2 ? 30 : 14);
    for (int t = 0; t < 30; ++t) {
      std::vector<LatticePoint> pts{LatticePoint(n)};
      for (std::size_t i = 0; i < n; ++i) {
        LatticePoint p(n);
        for (std::size_t j = 0; j < n; ++j) p[j] = 2 * u(rng);
        pts.push_back(p);
      }
      if (affinely_independent(pts)) cases.emplace_back(pts);
    }
  }
  int checked = 0, not_h = 0;
  for (const auto& d : cases) {
    if (even_lattice_points(d).size() < 64) continue;
    const auto r = compute_mms(d);
    const auto fp = mms_fixed_point(d);
    CHECK(r.mms_points == fp);
    if (d.ambient_dim() > 2) {
      const auto ref = oracle::mms(as_pts(d.points()));
      CHECK(as_pts(fp) == std::vector<oracle::Pt>(ref.begin(), ref.end()));
    }
    ++checked;
    not_h += r.classification != Classification::H;
  }
  CHECK(checked >= 20);
  CHECK(not_h >= 5);
}

TEST_CASE("result invariants") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Coord> u(0, 3);
  for (int t = 0; t < 80; ++t) {
    std::vector<LatticePoint> pts{LatticePoint(3)};
    for (int i = 0; i < 3; ++i) pts.push_back(LatticePoint{2 * u(rng), 2 * u(rng), 2 * u(rng)});
    if (!affinely_independent(pts)) continue;
    SimplicialSet d(pts);
    auto r = compute_mms(d);
    PointSet floor = midpoint_set(d.points());
    floor.insert(floor.end(), d.points().begin(), d.points().end());
    sort_unique(floor);
    CHECK(is_subset(floor, r.mms_points));
    CHECK(is_subset(r.mms_points, lattice_points(d)));
    CHECK(r.floor_count == static_cast<std::int64_t>(floor.size()));
    // Every non-vertex is mediated inside the set.
    PointSet evens;
    for (const auto& p : r.mms_points)
      if (is_even(p)) evens.push_back(p);
    const auto mids = midpoint_set(evens);
    for (const auto& p : r.mms_points)
      if (!d.has_vertex(p)) CHECK(set_contains(mids, p));
    CHECK(r.h_ratio.value >= 0);
    CHECK(r.h_ratio.value <= 1);
  }
}

TEST_CASE("classification text and JSON") {
  CHECK(to_string(Classification::Intermediate) == "INTERMEDIATE");
  CHECK(parse_classification("M") == Classification::M);
  CHECK_THROWS_AS(parse_classification("X"), InvalidInput);
  auto j = compute_mms(S({{0, 0}, {2, 4}, {4, 2}})).to_json();
  CHECK(j.find("\"classification\":\"M\"") != std::string::npos);
  CHECK(j.find("\"h_ratio\":\"0/1\"") != std::string::npos);
}
