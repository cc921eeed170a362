#include "mms/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mms/enumerate.hpp"
#include "mms/sampler.hpp"

#ifndef MMS_VERSION
#define MMS_VERSION "0.0.0"
#endif

namespace mms {

std::string_view version() noexcept { return MMS_VERSION; }

std::string_view to_string(RunMode m) noexcept { return m == RunMode::Full ? "FULL" : "SAMPLE"; }

RunMode parse_run_mode(std::string_view s) {
  if (s == "FULL" || s == "full") return RunMode::Full;
  if (s == "SAMPLE" || s == "sample") return RunMode::Sample;
  throw InvalidInput("unknown mode '" + std::string(s) + "'");
}

void PipelineConfig::validate() const {
  vertex_count(n, two_d);  // throws on bad n / two_d
  if (workers < 1) throw InvalidInput("worker count must be >= 1");
  if (mode == RunMode::Sample) SamplerConfig{n, two_d, seed, count}.validate();
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << text;
  if (!out.flush()) throw IoError(path.string(), 0, "write failed");
}

}  // namespace

// ---- RunManifest -----------------------------------------------------------

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["parameters"] = {{"n", n}, {"two_d", two_d}, {"mode", to_string(mode)}, {"count", count}};
  j["seed"] = seed;
  j["workers"] = workers;
  j["shards"] = shards;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["version"] = version;
  j["complete"] = complete;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    const auto& p = j.at("parameters");
    m.n = p.at("n").get<std::size_t>();
    m.two_d = p.at("two_d").get<Coord>();
    m.mode = parse_run_mode(p.at("mode").get<std::string>());
    m.count = p.at("count").get<std::uint64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.workers = j.at("workers").get<std::size_t>();
    m.shards = j.at("shards").get<std::vector<std::string>>();
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    m.version = j.value("version", "");
    m.complete = j.value("complete", false);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("manifest: ") + e.what());
  }
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), 0, "cannot open manifest");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void RunManifest::write(const std::filesystem::path& path) const { write_text(path, to_json()); }

PipelineConfig RunManifest::config() const {
  PipelineConfig c;
  c.n = n;
  c.two_d = two_d;
  c.mode = mode;
  c.seed = seed;
  c.count = count;
  c.workers = workers;
  return c;
}

// ---- work units ------------------------------------------------------------

void ingest(Store& shard, Canonicalizer& canon, const SimplicialSet& delta) {
  shard.put(MmsRecord::from_result(compute_mms(delta), canon.key(delta).bytes));
}

Store enumerate_shard(std::size_t n, Coord two_d, std::size_t partition) {
  Store shard;
  Canonicalizer canon;
  SimplexEnumerator e(n, two_d, partition);
  IndexSet j;
  while (e.next(j)) ingest(shard, canon, e.simplex(j));
  return shard;
}

Store sample_shard(const SamplerConfig& cfg, std::uint64_t begin, std::uint64_t end) {
  cfg.validate();
  Store shard;
  Canonicalizer canon;
  for (std::uint64_t i = begin; i < end; ++i) ingest(shard, canon, sample_simplex(cfg, i));
  return shard;
}

// ---- pipeline --------------------------------------------------------------

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const bool to_disk = !cfg.out_dir.empty();
  auto say = [&](const std::string& msg) {
    if (cfg.progress) cfg.progress(msg);
  };

  RunManifest manifest;
  manifest.command = "pipeline";
  manifest.n = cfg.n;
  manifest.two_d = cfg.two_d;
  manifest.mode = cfg.mode;
  manifest.seed = cfg.seed;
  manifest.count = cfg.mode == RunMode::Sample ? cfg.count : 0;
  manifest.workers = cfg.workers;
  manifest.version = std::string(version());
  manifest.started_at = utc_now();
  for (std::size_t w = 0; w < cfg.workers; ++w) manifest.shards.push_back("shards/shard-" + std::to_string(w) + ".jsonl");

  const auto manifest_path = cfg.out_dir / "manifest.json";
  if (to_disk) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir / "shards", ec);
    if (ec) throw IoError((cfg.out_dir / "shards").string(), 0, ec.message());
    manifest.write(manifest_path);
  }

  const std::size_t partitions = cfg.mode == RunMode::Full ? vertex_list(cfg.n, cfg.two_d).size() : 0;
  std::vector<Store> shards(cfg.workers);
  std::vector<std::exception_ptr> errors(cfg.workers);

  auto work = [&](std::size_t w) {
    try {
      Store& shard = shards[w];
      if (cfg.mode == RunMode::Full) {
        for (std::size_t p = w; p < partitions; p += cfg.workers) {
          const Store part = enumerate_shard(cfg.n, cfg.two_d, p);
          for (const auto& [k, r] : part.records()) shard.put(r);
          say("worker " + std::to_string(w) + ": partition " + std::to_string(p + 1) + "/" + std::to_string(partitions));
        }
      } else {
        const SamplerConfig sc{cfg.n, cfg.two_d, cfg.seed, cfg.count};
        const std::uint64_t begin = cfg.count * w / cfg.workers;
        const std::uint64_t end = cfg.count * (w + 1) / cfg.workers;
        shard = sample_shard(sc, begin, end);
        say("worker " + std::to_string(w) + ": samples [" + std::to_string(begin) + ", " + std::to_string(end) + ")");
      }
      if (to_disk) shard.write(cfg.out_dir / manifest.shards[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (cfg.workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < cfg.workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);  // manifest stays incomplete

  PipelineResult res;
  res.store = to_disk ? [&] {
    std::vector<std::filesystem::path> paths;
    for (const auto& s : manifest.shards) paths.push_back(cfg.out_dir / s);
    return merge_files(paths);
  }()
                      : merge(shards);
  say("merged " + std::to_string(res.store.size()) + " lattice classes");
  res.audited = audit(res.store, cfg.audit_stride);
  res.simplicial = stats(res.store, StatsScope::SimplicialSets);
  res.lattices = stats(res.store, StatsScope::Lattices);

  if (to_disk) {
    res.store.write(cfg.out_dir / "store.jsonl");
    write_text(cfg.out_dir / "stats.csv", stats_csv_header() + stats_csv_row(res.simplicial, cfg.n, cfg.two_d) +
                                              stats_csv_row(res.lattices, cfg.n, cfg.two_d));
    write_text(cfg.out_dir / "stats.json", "[" + res.simplicial.to_json() + ",\n" + res.lattices.to_json() + "]\n");
  }
  manifest.finished_at = utc_now();
  manifest.complete = true;
  if (to_disk) manifest.write(manifest_path);
  res.manifest = std::move(manifest);
  return res;
}

// ---- conjecture check ------------------------------------------------------

ConjectureReport check_conjecture(Coord two_d, std::size_t workers, const std::filesystem::path& out_dir) {
  PipelineConfig cfg;
  cfg.n = 2;
  cfg.two_d = two_d;
  cfg.workers = workers;
  cfg.out_dir = out_dir;
  const PipelineResult res = run_pipeline(cfg);

  ConjectureReport rep;
  rep.two_d = two_d;
  rep.simplices = res.simplicial.total_count;
  rep.lattices = res.lattices.total_count;
  rep.h_simplices = res.simplicial.h_count;
  rep.m_simplices = res.simplicial.m_count;
  rep.m_lattices = res.lattices.m_count;
  for (const auto& [k, r] : res.store.records())
    if (r.classification == Classification::Intermediate) rep.counterexamples.push_back(compute_mms(r.representative));
  return rep;
}

std::string ConjectureReport::to_text() const {
  std::ostringstream os;
  if (passed()) {
    os << "PASS 2d=" << two_d << " simplices=" << simplices << " lattices=" << lattices << " H=" << h_simplices
       << " M=" << m_simplices << " M_lattices=" << m_lattices << "\n";
  } else {
    os << "COUNTEREXAMPLE 2d=" << two_d << " intermediate_lattices=" << counterexamples.size() << "\n";
    for (const auto& r : counterexamples) os << r.to_json() << "\n";
  }
  return os.str();
}

std::int64_t half_triangle_boundary_points(const SimplicialSet& delta) {
  if (delta.ambient_dim() != 2 || !delta.full_dimensional()) throw InvalidInput("expected a planar triangle");
  const auto& v = delta.points();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % 3];
    total += std::gcd((b[0] - a[0]) / 2, (b[1] - a[1]) / 2);
  }
  return total;
}

}  // namespace mms
