#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "../oracle.hpp"
#include "mms/enumerate.hpp"
#include "mms/pipeline.hpp"

using namespace mms;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mms-pipeline-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

SimplicialSet S(std::initializer_list<LatticePoint> pts) { return SimplicialSet(std::vector<LatticePoint>(pts)); }

}  // namespace

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.command = "pipeline";
  m.n = 3;
  m.two_d = 8;
  m.mode = RunMode::Sample;
  m.seed = 12;
  m.count = 99;
  m.workers = 4;
  m.shards = {"shards/shard-0.jsonl"};
  m.version = "x";
  m.complete = true;
  const auto back = RunManifest::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  const auto cfg = back.config();
  CHECK(cfg.n == 3);
  CHECK(cfg.mode == RunMode::Sample);
  CHECK(cfg.count == 99);
  CHECK_THROWS_AS(RunManifest::from_json("{}"), InvalidInput);
}

TEST_CASE("config validation") {
  PipelineConfig c;
  c.n = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.n = 2;
  c.two_d = 4;
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.workers = 1;
  c.mode = RunMode::Sample;
  c.count = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  CHECK_THROWS_AS(parse_run_mode("BOTH"), InvalidInput);
}

TEST_CASE("in-memory pipeline") {
  PipelineConfig c;
  c.n = 2;
  c.two_d = 6;
  const auto res = run_pipeline(c);
  CHECK(res.simplicial.total_count == 30);
  CHECK(res.lattices.total_count == res.store.size());
  CHECK(res.manifest.complete);
  CHECK(res.audited >= 1);
}

TEST_CASE("on-disk pipeline writes every artifact and replays from its manifest") {
  TempDir tmp;
  PipelineConfig c;
  c.n = 2;
  c.two_d = 8;
  c.workers = 3;
  c.out_dir = tmp.path / "a";
  const auto res = run_pipeline(c);
  for (const char* f : {"manifest.json", "store.jsonl", "store.jsonl.idx", "stats.csv", "stats.json"})
    CHECK(fs::exists(c.out_dir / f));
  for (const auto& s : res.manifest.shards) CHECK(fs::exists(c.out_dir / s));
  const auto m = RunManifest::read(c.out_dir / "manifest.json");
  CHECK(m.complete);
  CHECK(m.workers == 3);

  auto replay = m.config();
  replay.out_dir = tmp.path / "b";
  run_pipeline(replay);
  for (const char* f : {"store.jsonl", "store.jsonl.idx", "stats.csv", "stats.json"})
    CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  for (const auto& s : m.shards) CHECK(slurp(tmp.path / "a" / s) == slurp(tmp.path / "b" / s));
}

TEST_CASE("sample mode splits indices across workers without changing the result") {
  PipelineConfig c;
  c.n = 3;
  c.two_d = 8;
  c.mode = RunMode::Sample;
  c.seed = 3;
  c.count = 200;
  const auto one = run_pipeline(c);
  c.workers = 4;
  const auto four = run_pipeline(c);
  CHECK(one.store.to_jsonl() == four.store.to_jsonl());
  CHECK(one.simplicial.total_count == 200);
}

TEST_CASE("planar conjecture check") {
  const auto r6 = check_conjecture(6);
  CHECK(r6.passed());
  CHECK(r6.m_lattices == 1);
  CHECK(r6.to_text().rfind("PASS", 0) == 0);
  CHECK(check_conjecture(10).passed());
}

TEST_CASE("half-triangle boundary points") {
  CHECK(half_triangle_boundary_points(S({{0, 0}, {4, 0}, {0, 4}})) == 6);
  CHECK(half_triangle_boundary_points(S({{0, 0}, {2, 4}, {4, 2}})) == 3);
  CHECK_THROWS_AS(half_triangle_boundary_points(S({{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}})), InvalidInput);

  // Against counting boundary points of the halved triangle directly.
  SimplexEnumerator e(2, 12);
  while (auto s = e.next_simplex()) {
    std::vector<oracle::Pt> half;
    for (const auto& p : s->points()) half.push_back({p[0] / 2, p[1] / 2});
    std::int64_t boundary = 0;
    for (const auto& q : oracle::lattice_points(half))
      if (!oracle::in_hull(half, q, true)) ++boundary;
    CHECK(half_triangle_boundary_points(*s) == boundary);
  }
}
