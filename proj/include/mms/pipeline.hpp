#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mms/sampler.hpp"
#include "mms/store.hpp"

namespace mms {

std::string_view version() noexcept;

enum class RunMode { Full, Sample };

std::string_view to_string(RunMode m) noexcept;
RunMode parse_run_mode(std::string_view s);

struct PipelineConfig {
  std::size_t n = 2;
  Coord two_d = 2;
  RunMode mode = RunMode::Full;
  std::uint64_t seed = 1;   // sample mode
  std::uint64_t count = 0;  // sample mode: accepted samples
  std::size_t workers = 1;
  // Empty: keep everything in memory, write nothing.
  std::filesystem::path out_dir;
  std::size_t audit_stride = 100;
  std::function<void(const std::string&)> progress;

  void validate() const;
};

/// Record of one batch run; enough to replay it.
struct RunManifest {
  std::string command;
  std::size_t n = 0;
  Coord two_d = 0;
  RunMode mode = RunMode::Full;
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::size_t workers = 1;
  std::vector<std::string> shards;  // relative to out_dir
  std::string started_at;
  std::string finished_at;
  std::string version;
  bool complete = false;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
  static RunManifest read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

  PipelineConfig config() const;
};

/// Compute the MMS and key of one simplex and add it to `shard`.
void ingest(Store& shard, Canonicalizer& canon, const SimplicialSet& delta);

/// Shard for one FULL-mode partition (index sets starting at `partition`).
Store enumerate_shard(std::size_t n, Coord two_d, std::size_t partition);
/// Shard for sample indices [begin, end).
Store sample_shard(const SamplerConfig& cfg, std::uint64_t begin, std::uint64_t end);

struct PipelineResult {
  Store store;
  StatsSummary simplicial;
  StatsSummary lattices;
  RunManifest manifest;
  std::size_t audited = 0;
};

/// Enumerate or sample, compute and canonicalize every simplex, one shard
/// per worker, merge, audit, and compute statistics for both scopes.
///
/// FULL mode deals enumeration partitions (first vertex index) round-robin
/// to workers; SAMPLE mode gives each worker a contiguous block of sample
/// indices. Output files under out_dir:
///   manifest.json, shards/shard-<w>.jsonl, store.jsonl, store.jsonl.idx,
///   stats.csv, stats.json
/// The manifest is written first with complete=false and rewritten on
/// success. Merged store and stats do not depend on the worker count.
PipelineResult run_pipeline(const PipelineConfig& cfg);

struct ConjectureReport {
  Coord two_d = 0;
  std::uint64_t simplices = 0;
  std::uint64_t lattices = 0;
  std::uint64_t h_simplices = 0;
  std::uint64_t m_simplices = 0;
  std::uint64_t m_lattices = 0;
  std::vector<MmsResult> counterexamples;  // one per INTERMEDIATE lattice class

  bool passed() const noexcept { return counterexamples.empty(); }
  std::string to_text() const;
};

/// Planar check that every simplex of maximal degree <= two_d is an H- or
/// an M-simplex.
ConjectureReport check_conjecture(Coord two_d, std::size_t workers = 1,
                                  const std::filesystem::path& out_dir = {});

/// Number of lattice points on the boundary of (1/2)conv(delta) for a
/// planar triangle with even vertices. Four or more of them force an
/// H-simplex.
std::int64_t half_triangle_boundary_points(const SimplicialSet& delta);

}  // namespace mms
