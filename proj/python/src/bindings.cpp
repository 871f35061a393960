#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotkit/cantor.hpp"
#include "rotkit/dynamics.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/lambda_tree.hpp"
#include "rotkit/series.hpp"
#include "rotkit/verify.hpp"

namespace py = pybind11;
using namespace rotkit;

namespace {

// Rationals cross the boundary as "num/den" strings; the Python layer
// converts them to fractions.Fraction.
Rational R(const std::string& s) { return Rational::parse(s); }

py::dict plateau_dict(const Plateau& p) {
  py::dict d;
  d["lo"] = p.lo.str();
  d["hi"] = p.hi.str();
  d["sentinel"] = p.sentinel;
  return d;
}

py::dict rho_exact_py(const std::string& lambda, const std::string& delta, std::optional<std::uint64_t> max_depth) {
  const RhoResult r = rho_exact(R(lambda), R(delta), max_depth);
  py::dict d;
  d["rho"] = r.rho.str();
  d["plateau"] = plateau_dict(r.plateau);
  d["depth"] = r.depth;
  return d;
}

py::dict rho_estimate_py(const std::string& lambda, const std::string& delta, std::uint64_t n, long prec) {
  const RhoEstimate e = rho_estimate(ContractedRotation(R(lambda), R(delta)), Rational(0), n, prec);
  py::dict d;
  d["n"] = e.n;
  d["estimate"] = e.estimate.to_fixed(30);
  d["lower"] = e.lower.to_rational().str();
  d["upper"] = e.upper.to_rational().str();
  d["error_bar"] = e.error_bar.str();
  return d;
}

py::list tree_row_py(const std::string& lambda, unsigned k) {
  py::list out;
  for (const auto& n : tree_row(R(lambda), k)) {
    py::dict d;
    d["fraction"] = n.frac.str();
    d["value"] = n.value().str();
    d["plateau"] = plateau_dict(plateau(n));
    out.append(d);
  }
  return out;
}

py::dict periodic_orbit_py(const std::string& lambda, const std::string& delta) {
  const ContractedRotation m(R(lambda), R(delta));
  const Fraction rho = rho_exact(m.lambda(), m.delta()).rho;
  const PeriodicOrbit o = find_periodic_orbit(m, rho);
  py::list pts;
  for (const auto& p : o.points) pts.append(p.str());
  py::dict d;
  d["rho"] = rho.str();
  d["points"] = pts;
  d["wrap_word"] = o.wrap_word;
  d["touches_discontinuity"] = o.touches_discontinuity;
  d["left_limit"] = o.left_limit;
  return d;
}

py::dict delta_of_rho_py(const std::string& lambda, const std::string& rho, const std::string& eps) {
  const SeriesValue v = delta_of_rho(RhoSpec::parse(rho), R(lambda), R(eps));
  py::dict d;
  d["partial_sum"] = v.partial_sum.str();
  d["tail_bound"] = v.tail_bound.str();
  d["terms"] = v.terms_used;
  d["value"] = v.value.to_fixed(40);
  return d;
}

py::list cover_row_py(const std::string& lambda, unsigned k) {
  py::list out;
  for (const auto& g : cover_row(R(lambda), k).gaps) out.append(py::make_tuple(g.lo.str(), g.hi.str()));
  return out;
}

py::dict suite_py(const std::string& name, std::uint64_t seed) {
  VerifyOptions o;
  o.seed = seed;
  const SuiteResult r = run_suite(name, o);
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["checks"] = r.checks;
  d["failures"] = r.failures;
  return d;
}

py::dict criterion_py(const std::string& id) {
  const CriterionResult r = run_criterion(id);
  py::dict d;
  d["id"] = r.id;
  d["title"] = r.title;
  d["passed"] = r.passed;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rotkit native core";

  auto base = py::register_exception<Error>(m, "RotkitError", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", invalid.ptr());
  py::register_exception<ResourceLimit>(m, "ResourceLimit", base.ptr());
  py::register_exception<DepthExceeded>(m, "DepthExceeded", base.ptr());
  py::register_exception<VerificationFailed>(m, "VerificationFailed", base.ptr());
  py::register_exception<HorizonExceeded>(m, "HorizonExceeded", base.ptr());
  py::register_exception<HypothesisViolated>(m, "HypothesisViolated", base.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", base.ptr());
  py::register_exception<MatchingFailed>(m, "MatchingFailed", base.ptr());

  m.def("rho_exact", &rho_exact_py, py::arg("lam"), py::arg("delta"), py::arg("max_depth") = py::none());
  m.def("rho_estimate", &rho_estimate_py, py::arg("lam"), py::arg("delta"), py::arg("n"),
        py::arg("precision_bits") = 128);
  m.def("tree_row", &tree_row_py, py::arg("lam"), py::arg("k"));
  m.def("periodic_orbit", &periodic_orbit_py, py::arg("lam"), py::arg("delta"));
  m.def("delta_of_rho", &delta_of_rho_py, py::arg("lam"), py::arg("rho"), py::arg("eps"));
  m.def("cover_row", &cover_row_py, py::arg("lam"), py::arg("k"));
  m.def("suite_names", [] {
    std::vector<std::string> out;
    for (const auto& s : suite_catalog()) out.push_back(s.name);
    return out;
  });
  m.def("run_suite", &suite_py, py::arg("name"), py::arg("seed") = VerifyOptions{}.seed);
  m.def("criterion_ids", &criterion_ids);
  m.def("run_criterion", &criterion_py, py::arg("id"));
}
