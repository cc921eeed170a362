// Command-line front end. Data goes to stdout or files, progress to stderr.
//
// Exit codes: 0 ok, 1 invalid input, 2 conjecture counterexample, 3 I/O.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mms/enumerate.hpp"
#include "mms/pipeline.hpp"
#include "mms/sampler.hpp"
#include "mms/sos.hpp"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitCounterexample = 2;
constexpr int kExitIo = 3;

std::size_t default_workers() {
  if (const char* env = std::getenv("MMS_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring MMS_WORKERS=" << env << "\n";
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mms::IoError(path, 0, "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void progress(const std::string& msg) { std::cerr << msg << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  using namespace mms;

  CLI::App app{"Maximal mediated sets of lattice simplices"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  int exit_code = 0;

  std::size_t dim = 2;
  Coord deg = 2;
  std::size_t workers = default_workers();
  std::uint64_t seed = 1, count = 0;
  std::string out, out_dir, delta_text, beta_text, terms_path, store_path, manifest_path;
  std::string algorithm = "removal", scope = "both", format = "json", mode = "FULL";
  std::optional<std::size_t> partition;
  std::vector<std::string> inputs;
  bool quiet = false, bound_exact = false;
  Coord up_to = 0;

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Enumerate n-simplices with a vertex at the origin");
  en->add_option("--dim", dim, "Dimension n")->required();
  en->add_option("--deg", deg, "Maximal degree 2d")->required();
  en->add_option("--partition", partition, "Only index sets whose first vertex has this 0-based index");
  en->add_option("--out", out, "Write a JSONL shard of MMS records instead of listing simplices");
  en->callback([&] {
    if (out.empty()) {
      SimplexEnumerator e(dim, deg, partition);
      while (auto s = e.next_simplex()) std::cout << to_string(*s) << "\n";
      return;
    }
    Store shard;
    if (partition) {
      shard = enumerate_shard(dim, deg, *partition);
    } else {
      const std::size_t m = vertex_list(dim, deg).size();
      for (std::size_t p = 0; p < m; ++p) {
        const Store part = enumerate_shard(dim, deg, p);
        for (const auto& [k, r] : part.records()) shard.put(r);
      }
    }
    shard.write(out);
    std::cerr << shard.total_multiplicity() << " simplices, " << shard.size() << " lattice classes\n";
  });

  // sample
  auto* sa = app.add_subcommand("sample", "Seeded uniform sample of n-simplices");
  sa->add_option("--dim", dim)->required();
  sa->add_option("--deg", deg)->required();
  sa->add_option("--seed", seed)->required();
  sa->add_option("--count", count)->required();
  sa->add_option("--out", out, "Write a JSONL shard of MMS records instead of listing simplices");
  sa->callback([&] {
    const SamplerConfig cfg{dim, deg, seed, count};
    if (out.empty()) {
      SimplexSampler s(cfg);
      while (auto d = s.next()) std::cout << to_string(*d) << "\n";
      return;
    }
    const Store shard = sample_shard(cfg, 0, count);
    shard.write(out);
    std::cerr << shard.total_multiplicity() << " samples, " << shard.size() << " lattice classes\n";
  });

  // mms
  auto* mm = app.add_subcommand("mms", "Maximal mediated set of one simplex");
  mm->add_option("--delta", delta_text, "Vertices, e.g. \"0,0;2,4;4,2\"")->required();
  mm->add_option("--algorithm", algorithm)->check(CLI::IsMember({"removal", "fixed-point"}));
  mm->callback([&] {
    const auto d = parse_simplicial_set(delta_text);
    const auto algo = algorithm == "removal" ? MmsAlgorithm::Removal : MmsAlgorithm::FixedPoint;
    std::cout << compute_mms(d, algo).to_json() << "\n";
  });

  // canon
  auto* ca = app.add_subcommand("canon", "Canonical lattice key of a full-dimensional simplex");
  ca->add_option("--delta", delta_text)->required();
  ca->callback([&] {
    const auto d = parse_simplicial_set(delta_text);
    const auto key = canonical_key(d);
    std::cout << "generator " << to_string(generator_matrix(d)) << "\n";
    std::cout << "hnf " << to_string(key.hnf) << "\n";
    std::cout << "key " << key.bytes << "\n";
  });

  // stats
  auto* st = app.add_subcommand("stats", "Statistics of a merged store");
  st->add_option("--store", store_path)->required();
  st->add_option("--scope", scope)->check(CLI::IsMember({"simplicial", "lattices", "both"}));
  st->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  st->add_option("--dim", dim, "n column of the CSV (default: from the store)");
  st->add_option("--deg", deg, "2d column of the CSV (default: from the store)");
  st->callback([&] {
    const Store s = Store::read(store_path);
    std::vector<StatsScope> scopes;
    if (scope != "lattices") scopes.push_back(StatsScope::SimplicialSets);
    if (scope != "simplicial") scopes.push_back(StatsScope::Lattices);
    std::size_t n = dim;
    Coord d = deg;
    if (!st->count("--dim") || !st->count("--deg")) {
      for (const auto& [k, r] : s.records()) {
        if (!st->count("--dim")) n = r.representative.ambient_dim();
        if (!st->count("--deg")) d = std::max(d, max_degree(r.representative));
      }
    }
    if (format == "csv") std::cout << stats_csv_header();
    for (auto sc : scopes) {
      const auto sum = stats(s, sc);
      if (format == "csv") std::cout << stats_csv_row(sum, n, d);
      else std::cout << sum.to_json() << "\n";
    }
  });

  // export
  auto* ex = app.add_subcommand("export", "Deterministic dump of a store");
  ex->add_option("--store", store_path)->required();
  ex->add_option("--format", format)->check(CLI::IsMember({"jsonl", "csv"}))->required();
  ex->add_option("--out", out)->required();
  ex->callback([&] {
    const Store s = Store::read(store_path);
    export_store(s, format == "csv" ? ExportFormat::Csv : ExportFormat::Jsonl, out);
  });

  // merge
  auto* me = app.add_subcommand("merge", "Merge shards into one store (plus offset index)");
  me->add_option("--out", out)->required();
  me->add_option("shards", inputs, "Shard files")->required();
  me->callback([&] {
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    const Store s = merge_files(paths);
    const std::size_t audited = audit(s);
    s.write(out);
    std::cerr << s.size() << " lattice classes, " << s.total_multiplicity() << " simplices, audited " << audited << "\n";
  });

  // check-sos
  auto* cs = app.add_subcommand("check-sos", "Decide SOS-ness of a circuit or simplex-supported SONC polynomial");
  cs->add_option("--delta", delta_text)->required();
  auto* beta_opt = cs->add_option("--beta", beta_text, "Interior exponent of a circuit polynomial");
  auto* terms_opt = cs->add_option("--terms", terms_path, "JSON file with inner terms");
  beta_opt->excludes(terms_opt);
  cs->add_flag("--bound-exact", bound_exact, "With --terms: decide whether the SOS bound equals the circuit bound");
  cs->callback([&] {
    const auto d = parse_simplicial_set(delta_text);
    if (!beta_text.empty()) {
      const auto dec = decide_circuit(CircuitSupport(d, parse_point(beta_text)));
      std::cout << (dec.verdict ? "SOS" : "NOT_SOS") << " " << dec.to_json() << "\n";
      return;
    }
    if (terms_path.empty()) throw InvalidInput("one of --beta or --terms is required");
    const SimplexSupportedPoly f(d, parse_terms_json(read_file(terms_path)));
    if (bound_exact) {
      const auto dec = decide_sos_bound_exact(f);
      std::cout << (dec.verdict ? "EXACT" : "NOT_EXACT") << " " << dec.to_json() << "\n";
    } else {
      const auto dec = decide_sonc_simplex(f);
      std::cout << (dec.verdict ? "SOS" : "NOT_SOS") << " " << dec.to_json() << "\n";
    }
  });

  // check-conjecture
  auto* cc = app.add_subcommand("check-conjecture", "Check that every planar simplex is an H- or an M-simplex");
  cc->add_option("--deg", deg, "Maximal degree 2d")->required();
  cc->add_option("--from", up_to, "Also check every even degree from this one up to --deg");
  cc->add_option("--workers", workers);
  cc->add_option("--out-dir", out_dir, "Keep pipeline outputs (only with a single degree)");
  cc->callback([&] {
    const Coord lo = up_to ? up_to : deg;
    if (lo < 2 || lo % 2 || lo > deg) throw InvalidInput("--from must be even, >= 2 and <= --deg");
    for (Coord d = lo; d <= deg; d += 2) {
      const auto rep = check_conjecture(d, workers, lo == deg ? std::filesystem::path(out_dir) : std::filesystem::path());
      std::cout << rep.to_text();
      if (!rep.passed()) exit_code = kExitCounterexample;
    }
  });

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "Enumerate or sample, compute, canonicalize, store and summarize");
  pl->add_option("--dim", dim);
  pl->add_option("--deg", deg);
  pl->add_option("--mode", mode)->check(CLI::IsMember({"FULL", "SAMPLE", "full", "sample"}));
  pl->add_option("--seed", seed);
  pl->add_option("--count", count, "Accepted samples (SAMPLE mode)");
  pl->add_option("--workers", workers);
  pl->add_option("--out-dir", out_dir)->required();
  pl->add_option("--manifest", manifest_path, "Replay the run recorded in this manifest");
  pl->add_flag("--quiet", quiet);
  pl->callback([&] {
    PipelineConfig cfg;
    if (!manifest_path.empty()) {
      cfg = RunManifest::read(manifest_path).config();
      if (pl->count("--workers")) cfg.workers = workers;
    } else {
      if (!pl->count("--dim") || !pl->count("--deg")) throw InvalidInput("--dim and --deg are required without --manifest");
      cfg.n = dim;
      cfg.two_d = deg;
      cfg.mode = parse_run_mode(mode);
      cfg.seed = seed;
      cfg.count = count;
      cfg.workers = workers;
    }
    cfg.out_dir = out_dir;
    if (!quiet) cfg.progress = progress;
    const auto res = run_pipeline(cfg);
    std::cout << stats_csv_header() << stats_csv_row(res.simplicial, cfg.n, cfg.two_d)
              << stats_csv_row(res.lattices, cfg.n, cfg.two_d);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return exit_code;
}
