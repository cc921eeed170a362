#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mms/enumerate.hpp"
#include "mms/pipeline.hpp"
#include "mms/sampler.hpp"
#include "mms/sos.hpp"

namespace py = pybind11;
using namespace mms;

namespace {

using Point = std::vector<Coord>;
using Points = std::vector<Point>;

LatticePoint to_point(const Point& p) { return LatticePoint(std::span<const Coord>(p)); }

Point from_point(const LatticePoint& p) {
  auto c = p.coords();
  return Point(c.begin(), c.end());
}

Points from_points(const PointSet& s) {
  Points out;
  out.reserve(s.size());
  for (const auto& p : s) out.push_back(from_point(p));
  return out;
}

PointSet to_points(const Points& pts) {
  PointSet out;
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

SimplicialSet to_simplex(const Points& pts) { return SimplicialSet(to_points(pts)); }

std::string frac(const Rational& q) { return q.get_str(); }

py::dict result_dict(const MmsResult& r) {
  py::dict d;
  d["delta"] = from_points(r.delta.points());
  d["mms_points"] = from_points(r.mms_points);
  d["conv_count"] = r.conv_count;
  d["floor_count"] = r.floor_count;
  d["classification"] = std::string(to_string(r.classification));
  d["h_ratio"] = r.h_ratio.str();
  d["h_counts"] = py::make_tuple(r.h_ratio.numerator_count, r.h_ratio.denominator_count);
  d["both_bounds_equal"] = r.both_bounds_equal;
  return d;
}

py::dict stats_dict(const StatsSummary& s) {
  py::dict d;
  d["scope"] = std::string(to_string(s.scope));
  d["total_count"] = s.total_count;
  d["h_count"] = s.h_count;
  d["m_count"] = s.m_count;
  d["intermediate_count"] = s.intermediate_count;
  d["mean_h_ratio"] = s.mean_h_ratio;
  d["mean_h_ratio_exact"] = frac(s.mean_exact);
  d["sd_h_ratio"] = s.sd_h_ratio;
  d["sd_h_ratio_sample"] = s.sd_h_ratio_sample;
  d["histogram"] = std::vector<std::uint64_t>(s.histogram.begin(), s.histogram.end());
  if (s.decrease_factor) d["decrease_factor"] = *s.decrease_factor;
  return d;
}

std::vector<std::vector<Coord>> matrix_rows(const IntegerMatrix& m) {
  std::vector<std::vector<Coord>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  return rows;
}

IntegerMatrix to_matrix(const std::vector<std::vector<Coord>>& rows) {
  if (rows.empty()) throw InvalidInput("empty matrix");
  IntegerMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw InvalidInput("ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<InnerTerm> to_terms(const std::vector<std::pair<Point, std::string>>& terms) {
  std::vector<InnerTerm> out;
  for (const auto& [beta, sign] : terms) out.push_back(make_term(to_point(beta), parse_coeff_sign(sign)));
  return out;
}

}  // namespace

PYBIND11_MODULE(mmsets, m) {
  m.doc() = "Maximal mediated sets of even lattice simplices";
  m.attr("__version__") = std::string(version());

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

  m.def("is_even", [](const Point& p) { return is_even(to_point(p)); });
  m.def("midpoint_set", [](const Points& pts) {
    const auto s = to_points(pts);
    return from_points(midpoint_set(s));
  });
  m.def("contains", [](const Points& delta, const Point& p) { return contains(to_simplex(delta), to_point(p)); });
  m.def("lattice_points", [](const Points& delta) { return from_points(lattice_points(to_simplex(delta))); });
  m.def("even_lattice_points", [](const Points& delta) { return from_points(even_lattice_points(to_simplex(delta))); });
  m.def("max_degree", [](const Points& delta) { return max_degree(to_simplex(delta)); });

  m.def(
      "mms",
      [](const Points& delta, const std::string& algorithm) {
        MmsAlgorithm a;
        if (algorithm == "removal") a = MmsAlgorithm::Removal;
        else if (algorithm == "fixed-point") a = MmsAlgorithm::FixedPoint;
        else throw InvalidInput("algorithm must be 'removal' or 'fixed-point'");
        return result_dict(compute_mms(to_simplex(delta), a));
      },
      py::arg("delta"), py::arg("algorithm") = "removal");

  m.def("generator_matrix", [](const Points& delta) { return matrix_rows(generator_matrix(to_simplex(delta))); });
  m.def("hnf", [](const std::vector<std::vector<Coord>>& rows) { return matrix_rows(hnf(to_matrix(rows))); });
  m.def("canonical_key", [](const Points& delta) { return canonical_key(to_simplex(delta)).bytes; });
  m.def("equivalent", [](const Points& a, const Points& b) { return equivalent(to_simplex(a), to_simplex(b)); });

  m.def("vertex_list", [](std::size_t n, Coord two_d) { return from_points(vertex_list(n, two_d).rows); });
  m.def("count_simplices", [](std::size_t n, Coord two_d, std::optional<std::size_t> partition) {
    return count_simplices(n, two_d, partition);
  }, py::arg("n"), py::arg("two_d"), py::arg("partition") = py::none());
  m.def(
      "enumerate",
      [](std::size_t n, Coord two_d, std::optional<std::size_t> partition) {
        std::vector<Points> out;
        SimplexEnumerator e(n, two_d, partition);
        while (auto s = e.next_simplex()) out.push_back(from_points(s->points()));
        return out;
      },
      py::arg("n"), py::arg("two_d"), py::arg("partition") = py::none());
  m.def(
      "sample",
      [](std::size_t n, Coord two_d, std::uint64_t seed, std::uint64_t count) {
        std::vector<Points> out;
        SimplexSampler s(SamplerConfig{n, two_d, seed, count});
        while (auto d = s.next()) out.push_back(from_points(d->points()));
        return out;
      },
      py::arg("n"), py::arg("two_d"), py::arg("seed"), py::arg("count"));

  m.def("circuit_is_sos",
        [](const Points& delta, const Point& beta) { return circuit_is_sos(CircuitSupport(to_simplex(delta), to_point(beta))); });
  m.def("sonc_simplex_is_sos", [](const Points& delta, const std::vector<std::pair<Point, std::string>>& terms) {
    return sonc_simplex_is_sos(SimplexSupportedPoly(to_simplex(delta), to_terms(terms)));
  });
  m.def("sos_bound_is_exact", [](const Points& delta, const std::vector<std::pair<Point, std::string>>& terms) {
    return sos_bound_is_exact(SimplexSupportedPoly(to_simplex(delta), to_terms(terms)));
  });

  m.def(
      "run_pipeline",
      [](std::size_t n, Coord two_d, const std::string& mode, std::uint64_t seed, std::uint64_t count, std::size_t workers,
         const std::string& out_dir) {
        PipelineConfig cfg;
        cfg.n = n;
        cfg.two_d = two_d;
        cfg.mode = parse_run_mode(mode);
        cfg.seed = seed;
        cfg.count = count;
        cfg.workers = workers;
        cfg.out_dir = out_dir;
        PipelineResult res;
        {
          py::gil_scoped_release release;
          res = run_pipeline(cfg);
        }
        py::dict d;
        d["simplicial"] = stats_dict(res.simplicial);
        d["lattices"] = stats_dict(res.lattices);
        d["audited"] = res.audited;
        return d;
      },
      py::arg("n"), py::arg("two_d"), py::arg("mode") = "FULL", py::arg("seed") = 1, py::arg("count") = 0,
      py::arg("workers") = 1, py::arg("out_dir") = "");

  m.def(
      "check_conjecture",
      [](Coord two_d, std::size_t workers) {
        ConjectureReport rep;
        {
          py::gil_scoped_release release;
          rep = check_conjecture(two_d, workers);
        }
        py::dict d;
        d["passed"] = rep.passed();
        d["simplices"] = rep.simplices;
        d["lattices"] = rep.lattices;
        d["m_lattices"] = rep.m_lattices;
        py::list ce;
        for (const auto& r : rep.counterexamples) ce.append(result_dict(r));
        d["counterexamples"] = ce;
        return d;
      },
      py::arg("two_d"), py::arg("workers") = 1);
}
