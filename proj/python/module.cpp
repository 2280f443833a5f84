#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "anosovkit/cli.hpp"
#include "anosovkit/geomlab.hpp"
#include "anosovkit/otkahler.hpp"
#include "anosovkit/searchkit.hpp"

namespace py = pybind11;
using namespace anosovkit;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<long long> small_coeffs(const IntPolynomial& p) {
  std::vector<long long> out;
  for (const auto& c : p.coeffs()) {
    if (c > std::numeric_limits<long long>::max() || c < std::numeric_limits<long long>::min())
      throw py::value_error("coefficient does not fit in 64 bits: " + c.str());
    out.push_back(static_cast<long long>(c));
  }
  return out;
}

IntPolynomial from_list(const std::vector<long long>& c) { return IntPolynomial(std::vector<BigInt>(c.begin(), c.end())); }

ClassifyOptions options(bool gl, bool force_interval, long max_bits) {
  ClassifyOptions o;
  o.allow_gl = gl;
  o.force_interval = force_interval;
  o.max_precision_bits = max_bits;
  o.min_accept_bits = std::min<long>(o.min_accept_bits, max_bits);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the anosovkit C++ core";

  py::register_exception<PolyError>(m, "PolyError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<GeomError>(m, "GeomError", PyExc_RuntimeError);

  py::class_<IntPolynomial>(m, "IntPolynomial")
      .def(py::init(&from_list), py::arg("coeffs"), "Ascending integer coefficients c_0..c_n")
      .def_static("parse", [](const std::string& s) { return parse_poly(s); })
      .def_property_readonly("coeffs", &small_coeffs)
      .def_property_readonly("degree", &IntPolynomial::degree)
      .def("render", [](const IntPolynomial& p) { return p.render(); })
      .def("__str__", [](const IntPolynomial& p) { return p.render(); })
      .def("__repr__", [](const IntPolynomial& p) { return "IntPolynomial('" + p.render() + "')"; })
      .def("__eq__", [](const IntPolynomial& a, const IntPolynomial& b) { return a == b; })
      .def("__mul__", [](const IntPolynomial& a, const IntPolynomial& b) { return a * b; });

  m.def("parse_poly", [](const std::string& s) { return parse_poly(s); }, py::arg("text"));
  m.def("power_transform", &power_transform, py::arg("poly"), py::arg("m"));
  m.def("reverse", [](const IntPolynomial& p) { return reverse(p); }, py::arg("poly"));
  m.def("discriminant", [](const IntPolynomial& p) { return discriminant(p).str(); }, py::arg("poly"),
        "Decimal string, exact");
  m.def(
      "factor",
      [](const IntPolynomial& p) {
        const auto f = factor_oracle(p, 10);
        return py::make_tuple(f.irreducible, f.factors);
      },
      py::arg("poly"), "(irreducible, factors) from the brute-force oracle");

  m.def(
      "certify",
      [](const IntPolynomial& p, bool gl, bool force_interval, long max_bits) {
        return to_py(to_json(classify(p, options(gl, force_interval, max_bits))));
      },
      py::arg("poly"), py::arg("gl") = false, py::arg("force_interval") = false, py::arg("max_bits") = 4096,
      "Spectral profile as a dict (schema anosovkit.profile/1)");
  m.def(
      "replay",
      [](const IntPolynomial& p, bool gl) {
        const auto prof = classify(p, options(gl, false, 4096));
        if (!prof.lambda || !prof.big_root) throw py::value_error("no certified real root > 1: " + prof.detail);
        return to_py(to_json(replay(p, prof)));
      },
      py::arg("poly"), py::arg("gl") = false);
  m.def(
      "search",
      [](int degree, int bound, int workers, bool gl, bool near_misses) {
        SearchOptions o;
        o.degree = degree;
        o.bound = bound;
        o.workers = workers;
        o.det_one = !gl;
        o.replay_near_misses = near_misses;
        SearchReport r;
        {
          py::gil_scoped_release release;
          r = search(o);
        }
        return to_py(to_json(r));
      },
      py::arg("degree"), py::arg("bound"), py::arg("workers") = 1, py::arg("gl") = false,
      py::arg("near_misses") = true);
  m.def(
      "build",
      [](const IntPolynomial& p) {
        const auto cert = build_certificate(p, classify(p));
        return to_py({{"schema", "anosovkit.build/1"}, {"certificate", to_json(cert)}, {"model", to_json(make_model(cert))}});
      },
      py::arg("poly"));
  m.def(
      "verify_torus", [](const IntPolynomial& p, int samples, std::uint64_t seed) { return to_py(to_json(verify_torus(p, classify(p), samples, seed))); },
      py::arg("poly"), py::arg("samples") = 100, py::arg("seed") = 1);
  m.def(
      "verify_ot", [](int s, int samples, std::uint64_t seed) { return to_py(ot::to_json(ot::run_suite(s, samples, seed))); },
      py::arg("s"), py::arg("samples") = 100, py::arg("seed") = 1);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI command in-process; returns (exit_code, stdout, stderr)");
}
