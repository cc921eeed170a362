#include "mms/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mms {

using ordered_json = nlohmann::ordered_json;

// ---- MmsRecord -------------------------------------------------------------

MmsRecord MmsRecord::from_result(const MmsResult& r, std::string key) {
  return MmsRecord{std::move(key),
                   r.delta,
                   static_cast<std::int64_t>(r.mms_points.size()),
                   r.conv_count,
                   r.floor_count,
                   r.classification,
                   r.h_ratio,
                   r.both_bounds_equal,
                   1};
}

std::string MmsRecord::to_json() const {
  ordered_json j;
  j["key"] = key;
  j["representative"] = to_string(representative);
  j["mms_size"] = mms_size;
  j["conv_count"] = conv_count;
  j["floor_count"] = floor_count;
  j["classification"] = to_string(classification);
  j["h_ratio"] = h_ratio.str();
  j["h_counts"] = {h_ratio.numerator_count, h_ratio.denominator_count};
  j["both_bounds_equal"] = both_bounds_equal;
  j["multiplicity"] = simplex_multiplicity;
  return j.dump();
}

MmsRecord MmsRecord::from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  HRatio h;
  h.numerator_count = j.at("h_counts").at(0).get<std::int64_t>();
  h.denominator_count = j.at("h_counts").at(1).get<std::int64_t>();
  h.value = Rational(j.at("h_ratio").get<std::string>());
  h.value.canonicalize();
  MmsRecord r{j.at("key").get<std::string>(),
              parse_simplicial_set(j.at("representative").get<std::string>()),
              j.at("mms_size").get<std::int64_t>(),
              j.at("conv_count").get<std::int64_t>(),
              j.at("floor_count").get<std::int64_t>(),
              parse_classification(j.at("classification").get<std::string>()),
              h,
              j.at("both_bounds_equal").get<bool>(),
              j.at("multiplicity").get<std::uint64_t>()};
  if (r.simplex_multiplicity < 1) throw InvalidInput("multiplicity must be >= 1");
  return r;
}

bool MmsRecord::same_summary(const MmsRecord& o) const {
  return mms_size == o.mms_size && conv_count == o.conv_count && floor_count == o.floor_count &&
         classification == o.classification && h_ratio.value == o.h_ratio.value &&
         h_ratio.numerator_count == o.h_ratio.numerator_count &&
         h_ratio.denominator_count == o.h_ratio.denominator_count && both_bounds_equal == o.both_bounds_equal;
}

// ---- Store -----------------------------------------------------------------

void Store::put(const MmsRecord& record) {
  auto [it, inserted] = records_.try_emplace(record.key, record);
  if (inserted) return;
  MmsRecord& cur = it->second;
  if (!cur.same_summary(record))
    throw ConsistencyError("records sharing key " + record.key + " disagree: " + to_string(cur.representative) +
                           " vs " + to_string(record.representative));
  cur.simplex_multiplicity += record.simplex_multiplicity;
  if (record.representative < cur.representative) cur.representative = record.representative;
}

std::optional<MmsRecord> Store::get(const std::string& key) const {
  if (auto it = records_.find(key); it != records_.end()) return it->second;
  return std::nullopt;
}

std::uint64_t Store::total_multiplicity() const noexcept {
  std::uint64_t s = 0;
  for (const auto& [k, r] : records_) s += r.simplex_multiplicity;
  return s;
}

std::string Store::to_jsonl() const {
  std::string out;
  for (const auto& [k, r] : records_) {
    out += r.to_json();
    out += '\n';
  }
  return out;
}

std::filesystem::path index_path(const std::filesystem::path& store_path) {
  auto p = store_path;
  p += ".idx";
  return p;
}

void Store::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  std::ofstream idx(index_path(path), std::ios::binary | std::ios::trunc);
  if (!idx) throw IoError(index_path(path).string(), 0, "cannot open for writing");
  std::uint64_t offset = 0;
  for (const auto& [k, r] : records_) {
    const std::string line = r.to_json() + "\n";
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    idx << k << '\t' << offset << '\n';
    if (!out) throw IoError(path.string(), offset, "write failed");
    offset += line.size();
  }
  out.flush();
  if (!out) throw IoError(path.string(), offset, "flush failed");
  if (!idx.flush()) throw IoError(index_path(path).string(), 0, "flush failed");
}

Store Store::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), 0, "cannot open for reading");
  Store s;
  std::string line;
  std::uint64_t offset = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::uint64_t here = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    try {
      s.put(MmsRecord::from_json(line));
    } catch (const ConsistencyError&) {
      throw;
    } catch (const std::exception& e) {
      throw IoError(path.string(), here, "malformed record on line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError(path.string(), offset, "read failed");
  return s;
}

std::optional<MmsRecord> lookup(const std::filesystem::path& store_path, const std::string& key) {
  const auto ipath = index_path(store_path);
  std::ifstream idx(ipath, std::ios::binary);
  if (!idx) throw IoError(ipath.string(), 0, "cannot open index");
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::string line;
  std::uint64_t pos = 0;
  while (std::getline(idx, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw IoError(ipath.string(), pos, "malformed index line");
    entries.emplace_back(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
    pos += line.size() + 1;
  }
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const auto& e, const std::string& k) { return e.first < k; });
  if (it == entries.end() || it->first != key) return std::nullopt;

  std::ifstream in(store_path, std::ios::binary);
  if (!in) throw IoError(store_path.string(), 0, "cannot open for reading");
  in.seekg(static_cast<std::streamoff>(it->second));
  if (!std::getline(in, line)) throw IoError(store_path.string(), it->second, "index points past end of store");
  try {
    MmsRecord r = MmsRecord::from_json(line);
    if (r.key != key) throw IoError(store_path.string(), it->second, "index out of date");
    return r;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(store_path.string(), it->second, std::string("malformed record: ") + e.what());
  }
}

Store merge(const std::vector<Store>& shards) {
  Store out;
  for (const auto& s : shards)
    for (const auto& [k, r] : s.records()) out.put(r);
  return out;
}

Store merge_files(const std::vector<std::filesystem::path>& shards) {
  Store out;
  for (const auto& p : shards) {
    const Store s = Store::read(p);
    for (const auto& [k, r] : s.records()) out.put(r);
  }
  return out;
}

std::size_t audit(const Store& store, std::size_t stride) {
  if (stride == 0) stride = 1;
  std::size_t i = 0, audited = 0;
  for (const auto& [k, r] : store.records()) {
    if (i++ % stride != 0) continue;
    const MmsResult fresh = compute_mms(r.representative);
    MmsRecord again = MmsRecord::from_result(fresh, r.key);
    if (!again.same_summary(r))
      throw ConsistencyError("audit mismatch for key " + k + " (representative " + to_string(r.representative) + ")");
    if (r.representative.full_dimensional() && canonical_key(r.representative).bytes != k)
      throw ConsistencyError("audit: representative does not map to its key " + k);
    ++audited;
  }
  return audited;
}

// ---- statistics ------------------------------------------------------------

std::string_view to_string(StatsScope s) noexcept {
  return s == StatsScope::SimplicialSets ? "simplicial_sets" : "lattices";
}

StatsSummary stats(const Store& store, StatsScope scope) {
  if (store.empty()) throw InvalidInput("statistics of an empty store");
  StatsSummary s;
  s.scope = scope;
  // Group identical h-values so the exact sums stay small.
  std::map<Rational, std::uint64_t> weights;
  for (const auto& [k, r] : store.records()) {
    const std::uint64_t w = scope == StatsScope::SimplicialSets ? r.simplex_multiplicity : 1;
    s.total_count += w;
    switch (r.classification) {
      case Classification::H: s.h_count += w; break;
      case Classification::M: s.m_count += w; break;
      case Classification::Intermediate: s.intermediate_count += w; break;
    }
    weights[r.h_ratio.value] += w;
    const Rational& v = r.h_ratio.value;
    mpz_class bin = (v.get_num() * static_cast<unsigned long>(kHistogramBins)) / v.get_den();
    const std::size_t b = std::min<std::size_t>(bin.get_ui(), kHistogramBins - 1);
    s.histogram[b] += w;
  }
  const mpz_class total = mpz_class(std::to_string(s.total_count));
  Rational sum(0), sum_sq(0);
  for (const auto& [v, w] : weights) {
    const Rational wq(mpz_class(std::to_string(w)));
    sum += wq * v;
    sum_sq += wq * v * v;
  }
  s.mean_exact = sum / Rational(total);
  const Rational var = sum_sq / Rational(total) - s.mean_exact * s.mean_exact;
  s.mean_h_ratio = s.mean_exact.get_d();
  s.sd_h_ratio = std::sqrt(var.get_d());
  if (s.total_count > 1) {
    const Rational svar = var * Rational(total) / Rational(total - 1);
    s.sd_h_ratio_sample = std::sqrt(svar.get_d());
  }
  if (scope == StatsScope::Lattices)
    s.decrease_factor = static_cast<double>(store.total_multiplicity()) / static_cast<double>(store.size());
  return s;
}

std::string StatsSummary::to_json() const {
  ordered_json j;
  j["scope"] = to_string(scope);
  j["total_count"] = total_count;
  j["h_count"] = h_count;
  j["m_count"] = m_count;
  j["intermediate_count"] = intermediate_count;
  j["mean_h_ratio_exact"] = mean_exact.get_str();
  j["mean_h_ratio"] = mean_h_ratio;
  j["sd_h_ratio"] = sd_h_ratio;
  j["sd_h_ratio_sample"] = sd_h_ratio_sample;
  j["histogram"] = histogram;
  if (decrease_factor) j["decrease_factor"] = *decrease_factor;
  return j.dump();
}

std::string stats_csv_header() {
  return "scope,n,2d,total,h_count,m_count,intermediate_count,mean,sd,decrease_factor\n";
}

std::string stats_csv_row(const StatsSummary& s, std::size_t n, Coord two_d) {
  char buf[512];
  std::string df = s.decrease_factor ? "" : "";
  if (s.decrease_factor) {
    char d[64];
    std::snprintf(d, sizeof d, "%.6f", *s.decrease_factor);
    df = d;
  }
  std::snprintf(buf, sizeof buf, "%s,%zu,%lld,%llu,%llu,%llu,%llu,%.6f,%.6f,%s\n", std::string(to_string(s.scope)).c_str(), n,
                static_cast<long long>(two_d), static_cast<unsigned long long>(s.total_count),
                static_cast<unsigned long long>(s.h_count), static_cast<unsigned long long>(s.m_count),
                static_cast<unsigned long long>(s.intermediate_count), s.mean_h_ratio, s.sd_h_ratio, df.c_str());
  return buf;
}

void export_store(const Store& store, ExportFormat format, const std::filesystem::path& path, std::optional<std::size_t> n,
                  std::optional<Coord> two_d) {
  if (format == ExportFormat::Jsonl) {
    store.write(path);
    return;
  }
  std::size_t dim = 0;
  Coord deg = 0;
  for (const auto& [k, r] : store.records()) {
    dim = std::max(dim, r.representative.ambient_dim());
    deg = std::max(deg, max_degree(r.representative));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << stats_csv_header();
  for (StatsScope scope : {StatsScope::SimplicialSets, StatsScope::Lattices})
    out << stats_csv_row(stats(store, scope), n.value_or(dim), two_d.value_or(deg));
  if (!out.flush()) throw IoError(path.string(), 0, "write failed");
}

}  // namespace mms
