#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qline/report.hpp"

namespace py = pybind11;
using namespace qline;
using quadrics::Point6;
using quadrics::QuadricParams;

namespace {

QuadricParams make_params(const std::array<double, 6>& c, const std::array<double, 3>& d) {
    return {c, d};
}

py::dict json_to_py(const report::Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_qline, m) {
    m.doc() = "intersection of three quadrics in six variables: smoothness checks, "
              "explicit complex lines and realness certificates";

    py::class_<QuadricParams>(m, "QuadricParams")
        .def(py::init(&make_params), py::arg("c"), py::arg("d"))
        .def_readwrite("c", &QuadricParams::c)
        .def_readwrite("d", &QuadricParams::d)
        .def("__repr__", [](const QuadricParams& p) {
            return report::to_json(p).dump();
        });

    py::class_<line::ComplexLine>(m, "ComplexLine")
        .def_readonly("a", &line::ComplexLine::a)
        .def_readonly("b", &line::ComplexLine::b)
        .def_readonly("lam", &line::ComplexLine::lambda)
        .def_readonly("mu", &line::ComplexLine::mu)
        .def_readonly("branch", &line::ComplexLine::branch)
        .def_readonly("max_residual", &line::ComplexLine::max_line_residual)
        .def_readonly("radical_equation_residual",
                      &line::ComplexLine::radical_equation_residual)
        .def_readonly("determinant_equation_residual",
                      &line::ComplexLine::determinant_equation_residual)
        .def("a_full", &line::ComplexLine::a_full)
        .def("b_full", &line::ComplexLine::b_full)
        .def("point_at", &line::ComplexLine::point_at, py::arg("t"));

    m.def("evaluate",
          [](const QuadricParams& p, const Point6& x) { return quadrics::evaluate(p, x); },
          py::arg("params"), py::arg("x"), "values of the three quadratic forms");
    m.def("residuals",
          [](const QuadricParams& p, const Point6& x) { return quadrics::residuals(p, x); },
          py::arg("params"), py::arg("x"));

    m.def("check",
          [](const QuadricParams& p, std::uint64_t seed) {
              return json_to_py(report::to_json(smoothness::full_report(p, seed)));
          },
          py::arg("params"), py::arg("seed") = 0,
          "real, complex and projective smoothness report");

    m.def("construct_lines",
          [](const QuadricParams& p) {
              const auto built = line::construct_line(p);
              return built.lines;
          },
          py::arg("params"), "all lines of the symmetric ansatz that pass membership");

    m.def("certify",
          [](const QuadricParams& p, const line::ComplexLine& l) {
              return json_to_py(report::to_json(certify::certify_no_real_points(p, l)));
          },
          py::arg("params"), py::arg("line"), "realness certificate for one line");

    m.def("min_imaginary_norm",
          [](const Point6& base, const Point6& direction) {
              const auto r = certify::min_imaginary_norm(base, direction);
              return py::make_tuple(r.argmin, r.value);
          },
          py::arg("base"), py::arg("direction"),
          "exact minimizer (t, value) of the squared imaginary norm along the line");

    m.def("integrability_indicator",
          [](const QuadricParams& p) { return scan::integrability_indicator(p); },
          py::arg("params"));

    m.def("scan",
          [](std::uint64_t budget, std::uint64_t max_results, std::uint64_t seed, int threads) {
              scan::SearchSpec spec;
              spec.budget = budget;
              spec.max_results = max_results;
              spec.seed = seed;
              spec.threads = threads;
              const auto result = scan::parameter_search(spec);
              return json_to_py(report::to_json(result, spec));
          },
          py::arg("budget") = 1000, py::arg("max_results") = 5, py::arg("seed") = 0,
          py::arg("threads") = 1, "search the default parameter box for certified instances");

    m.def("intersect",
          [](const QuadricParams& p, const line::ComplexLine& l, int bases,
             std::uint64_t seed) {
              return json_to_py(
                  report::to_json(scan::scan_intersecting_lines(p, l, bases, seed)));
          },
          py::arg("params"), py::arg("line"), py::arg("bases") = 16, py::arg("seed") = 0,
          "sample lines meeting the given line and test them for real points");

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
