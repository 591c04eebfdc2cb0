#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pfaffdist/configurations.hpp"
#include "pfaffdist/experiment.hpp"
#include "pfaffdist/incidence.hpp"
#include "pfaffdist/isometry.hpp"
#include "pfaffdist/metrics.hpp"
#include "pfaffdist/pfaffian.hpp"

namespace py = pybind11;
using namespace pfaffdist;
namespace cfg = pfaffdist::configurations;
namespace iso = pfaffdist::isometry;

namespace {

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

py::object to_py(const Rational& v) {
  return py::module_::import("fractions").attr("Fraction")(to_py(numerator(v)), to_py(denominator(v)));
}

BigInt from_py(const py::int_& v) { return BigInt(py::str(v).cast<std::string>()); }

using Pair = std::pair<double, double>;

std::vector<Pair> points(const std::vector<Point2>& pts) {
  std::vector<Pair> out;
  for (const auto& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

std::vector<Point2> from_pairs(const std::vector<Pair>& pts) {
  std::vector<Point2> out;
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

std::vector<std::tuple<double, double, double>> points3(const std::vector<cfg::Point3>& pts) {
  std::vector<std::tuple<double, double, double>> out;
  for (const auto& p : pts) out.emplace_back(p.x, p.y, p.z);
  return out;
}

std::vector<cfg::Point3> from_triples(const std::vector<std::tuple<double, double, double>>& pts) {
  std::vector<cfg::Point3> out;
  for (const auto& [x, y, z] : pts) out.push_back({x, y, z});
  return out;
}

cfg::ConfigSpec make_spec(const std::string& family, int m, int n, const std::string& scheme, double ratio,
                          std::uint64_t seed, double angle, double r1, double r2, const std::string& arc1,
                          const std::string& arc2) {
  cfg::ConfigSpec s;
  s.family = cfg::parse_family(family);
  s.m = m;
  s.n = n;
  s.scheme = {cfg::parse_scheme(scheme), ratio};
  s.seed = seed;
  s.angle = angle;
  s.r1 = r1;
  s.r2 = r2;
  s.arc1 = arc1;
  s.arc2 = arc2;
  s.validate();
  return s;
}

py::dict row_dict(const experiment::SweepRow& r) {
  py::dict d;
  d["family"] = r.family;
  d["m"] = r.m;
  d["n"] = r.n;
  d["c"] = r.c;
  d["distinct"] = r.distinct;
  d["energy"] = to_py(r.energy);
  d["proximity_energy"] = to_py(r.proximity_energy);
  d["incidences"] = to_py(r.incidences);
  d["cs_lower"] = to_py(r.cs_lower);
  d["theorem_bound"] = r.theorem_bound;
  d["ratio"] = r.ratio;
  d["ec_ratio"] = r.ec_ratio;
  d["max_multiplicity"] = r.max_multiplicity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distinct distances between point sets on Pfaffian curves";

  py::register_exception<Error>(m, "PfaffdistError", PyExc_ValueError);

  m.def(
      "component_bound",
      [](int alpha, int beta, int order, int dim) { return to_py(pfaffian::component_bound({alpha, beta, order}, dim)); },
      py::arg("alpha"), py::arg("beta"), py::arg("order"), py::arg("dim"));

  py::class_<metrics::PointConfiguration>(m, "PointConfiguration")
      .def_static(
          "make",
          [](const std::vector<Pair>& p1, const std::vector<Pair>& p2) {
            return metrics::PointConfiguration::make(from_pairs(p1), from_pairs(p2));
          },
          py::arg("p1"), py::arg("p2"))
      .def_property_readonly("p1", [](const metrics::PointConfiguration& c) { return points(c.p1()); })
      .def_property_readonly("p2", [](const metrics::PointConfiguration& c) { return points(c.p2()); })
      .def_property_readonly("m", &metrics::PointConfiguration::m)
      .def_property_readonly("n", &metrics::PointConfiguration::n)
      .def_property_readonly("is_exact", &metrics::PointConfiguration::is_exact)
      .def_property_readonly("provenance", &metrics::PointConfiguration::provenance);

  m.def(
      "generate",
      [](const std::string& family, int mm, int n, const std::string& scheme, double ratio, std::uint64_t seed,
         double angle, double r1, double r2, const std::string& arc1, const std::string& arc2) {
        return cfg::generate(make_spec(family, mm, n, scheme, ratio, seed, angle, r1, r2, arc1, arc2));
      },
      py::arg("family"), py::arg("m"), py::arg("n"), py::arg("scheme") = "arithmetic", py::arg("ratio") = 0.0,
      py::arg("seed") = 0, py::arg("angle") = 1.0, py::arg("r1") = 1.0, py::arg("r2") = 2.0, py::arg("arc1") = "exp",
      py::arg("arc2") = "circle");
  m.def(
      "generate_from_text", [](const std::string& text) { return cfg::generate(cfg::ConfigSpec::parse(text)); },
      py::arg("text"));

  m.def(
      "distance_histogram",
      [](const metrics::PointConfiguration& c, double tol) {
        std::vector<std::pair<double, std::int64_t>> out;
        for (const auto& k : metrics::distance_histogram(c, tol).classes) out.emplace_back(k.d_squared, k.multiplicity);
        return out;
      },
      py::arg("config"), py::arg("tol") = 1e-9);
  m.def(
      "energy",
      [](const metrics::PointConfiguration& c, double tol) {
        return to_py(metrics::energy(metrics::distance_histogram(c, tol)));
      },
      py::arg("config"), py::arg("tol") = 1e-9);
  m.def(
      "proximity_energy",
      [](const metrics::PointConfiguration& c, double cc, double tol) {
        return to_py(metrics::proximity_energy(c, cc, tol));
      },
      py::arg("config"), py::arg("c") = 0.25, py::arg("tol") = 1e-9);
  m.def(
      "count_incidences",
      [](const metrics::PointConfiguration& c, double cc, double tol) {
        return to_py(incidence::count_incidences(c, cc, tol));
      },
      py::arg("config"), py::arg("c") = 0.25, py::arg("tol") = 1e-9);
  m.def(
      "bounds_report",
      [](std::int64_t mm, std::int64_t n, std::int64_t dcount, const py::int_& e, int k) {
        const auto b = metrics::bounds_report(mm, n, dcount, from_py(e), k);
        py::dict d;
        d["cs_lower"] = to_py(b.cs_lower);
        d["cs_satisfied"] = b.cs_satisfied;
        d["theorem_bound"] = b.theorem_bound;
        d["theorem_ratio"] = b.theorem_ratio;
        d["ps_bound"] = b.ps_bound;
        return d;
      },
      py::arg("m"), py::arg("n"), py::arg("distinct"), py::arg("energy"), py::arg("k") = 2);

  py::class_<iso::Isometry>(m, "Isometry")
      .def(py::init([](const std::tuple<double, double, double, double>& a, const Pair& w) {
             const auto [a11, a12, a21, a22] = a;
             return iso::Isometry({a11, a12, a21, a22}, {w.first, w.second});
           }),
           py::arg("a"), py::arg("w"))
      .def_static("identity", &iso::Isometry::identity)
      .def_static("translation", [](const Pair& w) { return iso::Isometry::translation({w.first, w.second}); })
      .def_static(
          "rotation",
          [](const Pair& c, double angle) { return iso::Isometry::rotation({c.first, c.second}, angle); },
          py::arg("center"), py::arg("angle"))
      .def_static(
          "reflection",
          [](const Pair& p, const Pair& d) {
            return iso::Isometry::reflection({p.first, p.second}, {d.first, d.second});
          },
          py::arg("point"), py::arg("direction"))
      .def_static("parse", &iso::Isometry::parse)
      .def("__call__",
           [](const iso::Isometry& h, const Pair& v) {
             const Point2 r = h.apply({v.first, v.second});
             return Pair{r.x, r.y};
           })
      .def_property_readonly("a",
                             [](const iso::Isometry& h) {
                               return std::make_tuple(h.a().a11, h.a().a12, h.a().a21, h.a().a22);
                             })
      .def_property_readonly("w", [](const iso::Isometry& h) { return Pair{h.w().x, h.w().y}; })
      .def("to_text", &iso::Isometry::to_text)
      .def("__repr__", [](const iso::Isometry& h) { return "Isometry(" + h.to_text() + ")"; });
  m.def("compose", &iso::compose, py::arg("h2"), py::arg("h1"));
  m.def("inverse", &iso::inverse, py::arg("h"));
  m.def(
      "classify", [](const iso::Isometry& h, double tol) { return iso::describe(iso::classify(h, tol)); },
      py::arg("h"), py::arg("tol") = 1e-9);
  m.def(
      "rotation_commutator",
      [](const iso::Isometry& h1, const iso::Isometry& h2) {
        const Vec2 v = iso::rotation_commutator(h1, h2);
        return Pair{v.x, v.y};
      },
      py::arg("h1"), py::arg("h2"));
  m.def(
      "rigid_motions_mapping",
      [](const Pair& pi, const Pair& pk, const Pair& pj, const Pair& pl, double tol) {
        const auto r = iso::rigid_motions_mapping({pi.first, pi.second}, {pk.first, pk.second}, {pj.first, pj.second},
                                                  {pl.first, pl.second}, tol);
        return std::make_pair(r.direct, r.reflected);
      },
      py::arg("pi"), py::arg("pk"), py::arg("pj"), py::arg("pl"), py::arg("tol") = 1e-9);
  m.def(
      "detect_symmetries",
      [](const std::string& preset) {
        const auto rep = iso::detect_symmetries(*cfg::arc_preset(preset));
        std::vector<std::string> out;
        if (rep.infinite_family) out.push_back(rep.infinite_family->is_line() ? "infinite family: line" : "infinite family: circle");
        for (const auto& h : rep.symmetries) out.push_back(iso::describe(iso::classify(h, 1e-6)));
        return out;
      },
      py::arg("arc"));

  m.def(
      "gen_log_circles",
      [](double a, double b, double d, int mm, int n, const std::string& scheme, double ratio, std::uint64_t seed,
         bool mixed) {
        const auto pts = cfg::gen_log_circles({a, b, d}, mm, n, {cfg::parse_scheme(scheme), ratio}, seed, mixed);
        return std::make_pair(points3(pts.p), points3(pts.q));
      },
      py::arg("A") = 2.0, py::arg("B") = 1.0, py::arg("D") = 5.0, py::arg("m") = 8, py::arg("n") = 8,
      py::arg("scheme") = "geometric", py::arg("ratio") = 0.0, py::arg("seed") = 0, py::arg("mixed") = false);
  m.def(
      "log_circle_invariant",
      [](const std::vector<std::tuple<double, double, double>>& p, const std::vector<std::tuple<double, double, double>>& q,
         double a, double b, double d) { return cfg::log_circle_invariant({a, b, d}, from_triples(p), from_triples(q)); },
      py::arg("p"), py::arg("q"), py::arg("A") = 2.0, py::arg("B") = 1.0, py::arg("D") = 5.0);
  m.def(
      "distinct_distances_3d",
      [](const std::vector<std::tuple<double, double, double>>& p, const std::vector<std::tuple<double, double, double>>& q,
         double tol) { return cfg::distinct_distances_3d(from_triples(p), from_triples(q), tol); },
      py::arg("p"), py::arg("q"), py::arg("tol") = 1e-9);

  m.def(
      "run_sweep",
      [](const std::string& family, const std::vector<int>& sizes, double c, double tol, const std::string& scheme,
         std::uint64_t seed, const std::string& arc1, const std::string& arc2,
         const std::optional<std::filesystem::path>& out) {
        const auto spec = make_spec(family, 1, 1, scheme, 0.0, seed, 1.0, 1.0, 2.0, arc1, arc2);
        experiment::SweepOptions opt;
        opt.c = c;
        opt.tol = tol;
        const auto res = experiment::run_sweep(spec, sizes, opt);
        if (out) experiment::emit_report(res, *out);
        py::dict d;
        py::list rows;
        for (const auto& r : res.rows) rows.append(row_dict(r));
        d["rows"] = rows;
        d["exponent"] = res.exponent;
        return d;
      },
      py::arg("family"), py::arg("sizes"), py::arg("c") = 0.25, py::arg("tol") = 1e-9,
      py::arg("scheme") = "arithmetic", py::arg("seed") = 0, py::arg("arc1") = "exp", py::arg("arc2") = "circle",
      py::arg("out") = py::none());
}
