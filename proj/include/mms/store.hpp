#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mms/canon.hpp"
#include "mms/mms.hpp"

namespace mms {

/// One lattice class: its key, a representative simplex (lex-minimal among
/// those seen), the MMS summary shared by the class, and how many simplices
/// mapped to it.
struct MmsRecord {
  std::string key;
  SimplicialSet representative;
  std::int64_t mms_size = 0;
  std::int64_t conv_count = 0;
  std::int64_t floor_count = 0;
  Classification classification = Classification::H;
  HRatio h_ratio;
  bool both_bounds_equal = false;
  std::uint64_t simplex_multiplicity = 1;

  static MmsRecord from_result(const MmsResult& r, std::string key);

  /// Compact single-line JSON, fixed field order.
  std::string to_json() const;
  static MmsRecord from_json(std::string_view line);

  /// Counts, classification and h-ratio agree (key and multiplicity aside).
  bool same_summary(const MmsRecord& o) const;
};

/// Ordered collection of records keyed by canonical lattice key. Used both
/// as a single writer's shard and as a merged store.
class Store {
 public:
  /// Insert or, when the key exists, add multiplicities and keep the
  /// lex-smaller representative. Throws ConsistencyError if the summaries
  /// disagree.
  void put(const MmsRecord& record);
  std::optional<MmsRecord> get(const std::string& key) const;

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::map<std::string, MmsRecord>& records() const noexcept { return records_; }
  std::uint64_t total_multiplicity() const noexcept;

  /// Sorted JSON lines; byte-identical for equal contents.
  std::string to_jsonl() const;

  /// Writes `path` and the offset index `path + ".idx"`.
  void write(const std::filesystem::path& path) const;
  /// Reads a JSONL shard or store. Malformed lines raise IoError carrying
  /// the byte offset of the line.
  static Store read(const std::filesystem::path& path);

 private:
  std::map<std::string, MmsRecord> records_;
};

std::filesystem::path index_path(const std::filesystem::path& store_path);

/// Single-key lookup through the offset index, without loading the store.
std::optional<MmsRecord> lookup(const std::filesystem::path& store_path, const std::string& key);

/// One record per distinct key, multiplicities summed; independent of the
/// order of `shards`.
Store merge(const std::vector<Store>& shards);
Store merge_files(const std::vector<std::filesystem::path>& shards);

/// Recompute the MMS of every record whose position is a multiple of
/// `stride` (at least one record) and compare against the stored summary.
/// Returns the number of audited records; throws ConsistencyError on drift.
std::size_t audit(const Store& store, std::size_t stride = 100);

enum class StatsScope { SimplicialSets, Lattices };

std::string_view to_string(StatsScope s) noexcept;

inline constexpr std::size_t kHistogramBins = 20;

struct StatsSummary {
  StatsScope scope = StatsScope::SimplicialSets;
  std::uint64_t total_count = 0;
  std::uint64_t h_count = 0;
  std::uint64_t m_count = 0;
  std::uint64_t intermediate_count = 0;
  Rational mean_exact;
  double mean_h_ratio = 0;
  double sd_h_ratio = 0;         // population
  double sd_h_ratio_sample = 0;  // n - 1 denominator
  // Bin i counts h in [i/B, (i+1)/B); h = 1 goes in the last bin.
  std::array<std::uint64_t, kHistogramBins> histogram{};
  std::optional<double> decrease_factor;  // lattice scope only

  std::string to_json() const;
};

/// Simplicial-set scope weights each record by its multiplicity; lattice
/// scope counts each record once. Mean and variance are exact rationals,
/// rounded only at the end. Throws InvalidInput on an empty store.
StatsSummary stats(const Store& store, StatsScope scope);

/// Header plus one row: scope,n,2d,total,h_count,m_count,intermediate_count,mean,sd,decrease_factor
std::string stats_csv_header();
std::string stats_csv_row(const StatsSummary& s, std::size_t n, Coord two_d);

enum class ExportFormat { Jsonl, Csv };

/// JSONL: the sorted record dump (plus index). CSV: the stats table for
/// both scopes. n and 2d default to the largest seen in the store.
void export_store(const Store& store, ExportFormat format, const std::filesystem::path& path,
                  std::optional<std::size_t> n = std::nullopt, std::optional<Coord> two_d = std::nullopt);

}  // namespace mms
