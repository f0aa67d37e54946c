#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdl/dual.hpp"
#include "rdl/error.hpp"
#include "rdl/etabar.hpp"
#include "rdl/experiments.hpp"
#include "rdl/fixtures.hpp"
#include "rdl/measure.hpp"
#include "rdl/primal.hpp"
#include "rdl/structure.hpp"

namespace py = pybind11;

namespace rdl {
namespace {

// Points are the rows of x; coordinate hypotheses unless h is given.
Problem make_problem(const Matrix& x, const std::vector<int>& y, std::optional<std::vector<double>> masses,
                     const std::string& loss, std::optional<Matrix> h) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionError("x and y have different lengths");
  std::vector<LabeledPoint> pts;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    LabeledPoint p;
    p.x = x.row(i).transpose();
    p.y = y[static_cast<std::size_t>(i)];
    p.id = static_cast<std::size_t>(i);
    pts.push_back(std::move(p));
  }
  std::vector<double> m = masses ? *masses : std::vector<double>(y.size(), 1.0 / static_cast<double>(y.size()));
  FiniteMeasure mu(std::move(pts), std::move(m));
  if (h) {
    if (mu.size() != static_cast<std::size_t>(x.rows())) {
      throw DomainError("explicit hypotheses need a support without duplicate (x, y) pairs");
    }
    return Problem(std::move(mu), HypothesisSet(*h), Loss::parse(loss));
  }
  HypothesisSet hs = HypothesisSet::coordinates(mu);
  return Problem(std::move(mu), std::move(hs), Loss::parse(loss));
}

SolverConfig solver(const std::string& step_rule, std::size_t max_iters) {
  SolverConfig c;
  c.step_rule = step_rule == "newton" ? StepRule::Newton : StepRule::Gradient;
  c.max_iters = max_iters;
  return c;
}

py::dict row_dict(const SweepRow& r, const std::string& name) {
  py::dict d;
  d[py::str(name)] = r.parameter;
  d["excess_risk"] = r.excess_risk;
  d["l1_distance"] = r.l1_distance;
  d["zero_one"] = r.zero_one;
  d["l1_norm"] = r.l1_norm;
  d["l2_norm"] = r.l2_norm;
  for (const auto& [k, v] : r.extra) d[py::str(k)] = v;
  return d;
}

py::dict report_dict(const SweepReport& r) {
  py::list rows, runs;
  for (const auto& x : r.rows) rows.append(row_dict(x, r.parameter_name));
  for (const auto& x : r.runs) runs.append(row_dict(x, r.parameter_name));
  py::dict d;
  d["kind"] = r.kind;
  d["loss"] = r.loss;
  d["rows"] = rows;
  d["runs"] = runs;
  d["config"] = r.config;
  return d;
}

py::dict audit_dict(const AuditRecord& a) {
  py::dict d;
  d["name"] = a.name;
  d["lhs"] = a.lhs;
  d["rhs"] = a.rhs;
  d["holds"] = a.holds;
  d["slack"] = a.slack;
  d["applicable"] = a.applicable;
  d["parameters"] = a.parameters;
  d["note"] = a.note;
  return d;
}

}  // namespace
}  // namespace rdl

PYBIND11_MODULE(_rdl, m) {
  using namespace rdl;
  m.doc() = "Primal/dual risk minimization over linear classes";

  auto base = py::register_exception<Error>(m, "RdlError", PyExc_RuntimeError);
  py::register_exception<UnsupportedLossError>(m, "UnsupportedLossError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<EmptyMassError>(m, "EmptyMassError", base.ptr());
  py::register_exception<ScaleError>(m, "ScaleError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<Loss>(m, "Loss")
      .def(py::init([](const std::string& name) { return Loss::parse(name); }), py::arg("name"))
      .def_property_readonly("name", [](const Loss& l) { return std::string(l.name()); })
      .def("eval", &Loss::eval)
      .def("deriv", &Loss::deriv)
      .def("second_deriv", &Loss::second_deriv)
      .def("conjugate", &Loss::conjugate)
      .def("conjugate_deriv", &Loss::conjugate_deriv)
      .def("link", &Loss::link)
      .def("beta", &Loss::beta)
      .def("beta_conj", &Loss::beta_conj);

  py::class_<Problem>(m, "Problem")
      .def(py::init(&make_problem), py::arg("x"), py::arg("y"), py::arg("masses") = py::none(),
           py::arg("loss") = "logistic", py::arg("h") = py::none())
      .def_property_readonly("size", &Problem::size)
      .def_property_readonly("dim", &Problem::dim)
      .def_property_readonly("loss", [](const Problem& p) { return std::string(p.loss().name()); })
      .def_property_readonly("masses", [](const Problem& p) { return Vector(p.measure().masses()); })
      .def_property_readonly("labels", [](const Problem& p) {
        std::vector<int> y;
        for (const auto& pt : p.measure().points()) y.push_back(pt.y);
        return y;
      })
      .def("margins", &Problem::apply_A)
      .def("with_loss", [](const Problem& p, const std::string& l) { return p.with_loss(Loss::parse(l)); });

  m.def("fixture", [](const std::string& name, const std::string& loss) {
    const Loss l = Loss::parse(loss);
    if (name == "mirror") return fixtures::mirror(l);
    if (name == "single") return fixtures::single_point(l);
    if (name == "margins") return fixtures::margins(l);
    if (name == "difficult") return fixtures::difficult(l);
    if (name == "mixed") return fixtures::mixed(l);
    throw DomainError("unknown fixture '" + name + "'");
  }, py::arg("name"), py::arg("loss") = "logistic");
  m.def("load", [](const std::string& path, const std::string& loss, const std::string& label_col) {
    Dataset ds = path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? load_csv(path, label_col) : load_libsvm(path);
    return Problem(std::move(ds.measure), std::move(ds.hypotheses), Loss::parse(loss));
  }, py::arg("path"), py::arg("loss") = "logistic", py::arg("label_col") = "label");

  m.def("risk", &risk, py::arg("problem"), py::arg("w"));
  m.def("minimize", [](const Problem& p, double lam, const std::string& rule, std::size_t max_iters) {
    const PrimalTrajectory t = minimize_regularized(p, lam, solver(rule, max_iters));
    py::dict d;
    d["w"] = t.final_iterate().w;
    d["risk"] = t.final_iterate().risk;
    d["objective"] = t.final_iterate().objective;
    d["iterations"] = t.final_iterate().t;
    d["termination"] = std::string(to_string(t.termination));
    return d;
  }, py::arg("problem"), py::arg("lam") = 0.0, py::arg("step_rule") = "gradient", py::arg("max_iters") = 100000);

  m.def("solve_dual", [](const Problem& p) {
    const DualSolution s = solve_dual(p);
    py::dict d;
    d["q"] = s.q;
    d["objective"] = s.objective;
    d["feas_residual"] = s.feas_residual;
    d["primal_best"] = s.primal_best;
    d["gap"] = s.gap;
    d["provenance"] = std::string(to_string(s.provenance));
    return d;
  }, py::arg("problem"));

  m.def("difficult_set", [](const Problem& p) {
    return difficult_set(p, solve_dual(p)).indices;
  }, py::arg("problem"));
  m.def("canonical_difficult_set", [](const Problem& p) { return canonical_difficult_set(p).indices; },
        py::arg("problem"));
  m.def("eta_bar", [](const Problem& p) {
    const DualSolution s = solve_dual(p);
    return eta_bar(p, s, difficult_set(p, s)).values;
  }, py::arg("problem"));
  m.def("eta_w", [](const Problem& p, const Vector& w) { return eta_w(p, w).values; }, py::arg("problem"),
        py::arg("w"));
  m.def("balance", [](const Problem& p) { return balance(p.measure(), p.hypotheses()).value; }, py::arg("problem"));
  m.def("luxemburg_norm", [](const Vector& f, const Vector& masses, double p) {
    return luxemburg_norm(f, masses, Theta::power(p));
  }, py::arg("values"), py::arg("masses"), py::arg("p"));
  m.def("zero_one_risk", [](const Problem& p, const Vector& w) { return zero_one_risk(p, w); }, py::arg("problem"),
        py::arg("w"));

  m.def("convergence_sweep", [](const Problem& p, std::size_t max_iters) {
    return report_dict(convergence_sweep(p, solver("gradient", max_iters)));
  }, py::arg("problem"), py::arg("max_iters") = 100000);
  m.def("zo_oscillation", [](const std::string& eps, std::size_t iters) {
    return report_dict(zo_oscillation(eps, iters));
  }, py::arg("epsilon"), py::arg("iters") = 100);
  m.def("regularization_sweep", [](const Problem& p, std::uint64_t seed, std::size_t splits) {
    RegPathConfig c;
    c.seed = seed;
    c.splits = splits;
    return report_dict(regularization_sweep(p, c));
  }, py::arg("problem"), py::arg("seed") = 0, py::arg("splits") = 5);
  m.def("bound_audit", [](const Problem& p, const Vector& w) {
    py::list out;
    for (const auto& a : bound_audit(p, w, solve_dual(p))) out.append(audit_dict(a));
    return out;
  }, py::arg("problem"), py::arg("w"));
}
