// Python bindings for the main toolkit operations. Structured results cross
// as dicts; the hypograph machinery is exposed through its JSON documents.

#include "rii/annulus.hpp"
#include "rii/fieldgen.hpp"
#include "rii/hyperbolic.hpp"
#include "rii/json_io.hpp"
#include "rii/partition.hpp"
#include "rii/projective.hpp"
#include "rii/thicken.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

rii::ProjectiveCurve make_curve(const std::vector<std::vector<double>>& points, bool closed) {
  rii::ProjectiveCurve c;
  c.dim = points.empty() ? 0 : static_cast<int>(points.front().size()) - 1;
  c.closed = closed;
  c.points = points;
  rii::validate_curve(c);
  return c;
}

rii::ProjectiveCurve builtin_curve(const std::string& name, int samples) {
  if (name == "line") return rii::line_curve(samples);
  if (name == "conic") return rii::conic_curve(samples);
  if (name == "cubic") return rii::cubic_curve(samples);
  throw std::invalid_argument("unknown builtin curve " + name);
}

py::dict estimate_dict(const rii::CroftonEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["samples"] = e.samples;
  d["exact_length"] = e.exact_length;
  d["resamples"] = e.resamples;
  return d;
}

rii::MetricProfile profile_by_name(const std::string& name, double l) {
  if (name == "cylinder") return rii::MetricProfile::flat_cylinder();
  if (name == "flat") return rii::MetricProfile::polar(0);
  if (name == "spherical") return rii::MetricProfile::polar(1);
  if (name == "hyperbolic") return rii::MetricProfile::polar(-1);
  if (name == "collar") return rii::MetricProfile::collar(l);
  throw std::invalid_argument("unknown profile " + name);
}

}  // namespace

PYBIND11_MODULE(riitk, m) {
  m.doc() =
      "Reverse-isoperimetric verification toolkit: Cauchy-Crofton estimation, "
      "hypograph thick-thin partitions, the holomorphic annulus family and "
      "hyperbolic collar calculators.";
  m.attr("__version__") = "0.1.0";

  // Cauchy-Crofton on RP^n.
  m.def(
      "crofton_length",
      [](const std::vector<std::vector<double>>& points, bool closed, long long samples,
         std::uint64_t seed) { return estimate_dict(rii::crofton_length(make_curve(points, closed), samples, seed)); },
      py::arg("points"), py::arg("closed"), py::arg("samples"), py::arg("seed"),
      "Monte-Carlo Cauchy-Crofton length estimate of a unit-vector polyline in RP^n.");
  m.def(
      "normalized_length",
      [](const std::vector<std::vector<double>>& points, bool closed) {
        return rii::normalized_length(make_curve(points, closed));
      },
      py::arg("points"), py::arg("closed"),
      "Spherical polyline length normalized so a projective line has length 1.");
  m.def(
      "count_intersections",
      [](const std::vector<std::vector<double>>& points, bool closed,
         const std::vector<double>& normal) {
        return rii::count_intersections(make_curve(points, closed), rii::Hyperplane{normal});
      },
      py::arg("points"), py::arg("closed"), py::arg("normal"));
  m.def(
      "builtin_curve",
      [](const std::string& name, int samples) { return builtin_curve(name, samples).points; },
      py::arg("name"), py::arg("samples") = 360, "Points of a built-in curve (line/conic/cubic).");
  m.def(
      "verify_projective_rii",
      [](const std::vector<std::vector<double>>& points, bool closed, int degree) {
        auto chk = rii::verify_projective_rii(make_curve(points, closed), degree);
        py::dict d;
        d["lhs"] = chk.lhs;
        d["rhs"] = chk.rhs;
        d["pass"] = chk.pass;
        return d;
      },
      py::arg("points"), py::arg("closed"), py::arg("degree"));

  // Holomorphic annulus family.
  m.def("solve_inner_radius", &rii::solve_inner_radius, py::arg("a"),
        "Positive root of a^2 r^6 + r^4 - a^2 in (0, 1).");
  m.def(
      "annulus_area",
      [](double a, int radial, int angular) {
        return rii::annulus_area(rii::make_annulus_map(a), radial, angular);
      },
      py::arg("a"), py::arg("radial_order") = 64, py::arg("angular_order") = 256);
  m.def(
      "annulus_boundary_length",
      [](double a) {
        auto len = rii::annulus_boundary_length(rii::make_annulus_map(a));
        return py::make_tuple(len.outer, len.inner);
      },
      py::arg("a"), "Boundary lengths (outer, inner) of the annulus map.");
  m.def(
      "fiber_residual",
      [](double a, bool outer) { return rii::fiber_residual(rii::make_annulus_map(a), outer); },
      py::arg("a"), py::arg("outer"),
      "Max deviation of the boundary circle from its Lagrangian fiber.");

  // Hyperbolic and conformal calculators.
  m.def("collar_width", &rii::collar_width, py::arg("length"));
  m.def("collar_injrad", &rii::collar_injrad, py::arg("length"), py::arg("d"));
  m.def("conformal_radius", &rii::conformal_radius, py::arg("curvature"), py::arg("r"));
  m.def(
      "modulus",
      [](const std::string& profile, double a, double b, double l) {
        return rii::modulus(profile_by_name(profile, l), a, b);
      },
      py::arg("profile"), py::arg("a"), py::arg("b"), py::arg("l") = 1.0);
  m.def(
      "injrad_ratio_scan",
      [](const std::vector<double>& lengths, int rho_steps) {
        auto r = rii::injrad_ratio_scan(lengths, rho_steps);
        py::dict d;
        d["min_ratio"] = r.min_ratio;
        d["max_ratio"] = r.max_ratio;
        d["proof_expr_max"] = r.proof_expr_max;
        return d;
      },
      py::arg("lengths"), py::arg("rho_steps") = 64);
  m.def(
      "is_k_tame",
      [](const std::vector<std::pair<double, double>>& points, double cylinder_len, double k,
         int probes) {
        rii::CylinderPolyline p{cylinder_len, points};
        auto r = rii::is_k_tame(p, k, probes);
        py::dict d;
        d["tame"] = r.tame;
        d["required_k"] = r.required_k;
        return d;
      },
      py::arg("points"), py::arg("cylinder_len"), py::arg("k"), py::arg("probes") = 16);
  m.def(
      "admissible_chain",
      [](int n, const std::vector<std::tuple<int, int, double>>& edges, int from, int to) {
        auto g = rii::BridgeGraph::complete(n, std::numeric_limits<double>::infinity());
        for (const auto& [i, j, w] : edges) g.set(i, j, w);
        auto r = rii::admissible_chain(g, from, to);
        py::dict d;
        d["path"] = r.path;
        d["mst_length"] = r.mst_length;
        d["mst_edges"] = r.mst_edges;
        return d;
      },
      py::arg("n"), py::arg("edges"), py::arg("from_vertex"), py::arg("to_vertex"));

  // Hypograph machinery over JSON documents.
  m.def(
      "random_field_json",
      [](std::uint64_t seed) { return rii::field_to_json(rii::random_field(seed)).dump(); },
      py::arg("seed"), "Seeded random piecewise-linear field document.");
  m.def(
      "partition_field_json",
      [](const std::string& field_json, double mu_total, double delta1) {
        auto f = rii::field_from_json<double>(rii::Json::parse(field_json));
        rii::PartitionParams<double> params;
        params.t_min = f.xi();
        auto part = rii::thick_thin_partition(f, params);
        auto bounds = rii::verify_cardinality_bounds(part, mu_total, delta1);
        return rii::partition_to_json(part, &bounds).dump();
      },
      py::arg("field_json"), py::arg("mu_total") = 1.0, py::arg("delta1") = 0.1,
      "Thick/thin hypograph partition of a field document (float mode, 24 e^{-t} widths).");
  m.def(
      "thicken_field_json",
      [](const std::string& field_json) {
        auto f = rii::field_from_json<double>(rii::Json::parse(field_json));
        rii::PartitionParams<double> params;
        params.t_min = f.xi();
        auto th = rii::thickened_hypograph(f, rii::RadiusProfile<double>::constant(f, 1.0), params);
        return rii::field_to_json(th.field).dump();
      },
      py::arg("field_json"), "Thickened hypograph boundary f_dE of a field document.");
  m.def(
      "annulus_boundary_field_json",
      [](double a, double k) {
        auto m2 = rii::make_annulus_map(a);
        auto params = rii::PartitionParams<double>::for_k(k);
        return rii::field_to_json(rii::boundary_log_density(m2, 16, params.t_min)).dump();
      },
      py::arg("a"), py::arg("k") = 1.0);
}
