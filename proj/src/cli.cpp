#include "rdl/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdl/dual.hpp"
#include "rdl/error.hpp"
#include "rdl/etabar.hpp"
#include "rdl/experiments.hpp"
#include "rdl/fixtures.hpp"
#include "rdl/measure.hpp"
#include "rdl/primal.hpp"
#include "rdl/report.hpp"
#include "rdl/structure.hpp"

namespace rdl::cli {
namespace {

using nlohmann::json;

// Raised for bad flag combinations found after parsing.
struct UsageError : Error {
  using Error::Error;
};
// Raised while reading input data.
struct DataError : Error {
  using Error::Error;
};

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

struct Loaded {
  Problem problem;
  std::string digest;
};

Loaded load_problem(const RunConfig& cfg, const Loss& loss, bool fixture_default_mixed = false) {
  if (!cfg.data.empty() && !cfg.fixture.empty()) throw UsageError("--data and --fixture are exclusive");
  std::string fixture = cfg.fixture;
  if (cfg.data.empty() && fixture.empty()) {
    if (!fixture_default_mixed) throw UsageError("--data or --fixture is required");
    fixture = "mixed";
  }
  auto finish = [&](Problem p, std::string digest) {
    if (cfg.normalize) p = p.normalized();
    return Loaded{std::move(p), std::move(digest)};
  };
  if (!fixture.empty()) {
    std::optional<Problem> p;
    if (fixture == "mirror") p = fixtures::mirror(loss);
    else if (fixture == "single") p = fixtures::single_point(loss);
    else if (fixture == "margins") p = fixtures::margins(loss);
    else if (fixture == "difficult") p = fixtures::difficult(loss);
    else if (fixture == "mixed") p = fixtures::mixed(loss);
    else throw UsageError("unknown fixture '" + fixture + "'");
    return finish(*p, problem_digest(*p));
  }
  std::string format = cfg.format;
  if (format.empty()) {
    format = cfg.data.size() >= 4 && cfg.data.substr(cfg.data.size() - 4) == ".csv" ? "csv" : "libsvm";
  }
  try {
    Dataset ds = format == "csv" ? load_csv(cfg.data, cfg.label_col) : load_libsvm(cfg.data);
    return finish(Problem(std::move(ds.measure), std::move(ds.hypotheses), loss), file_digest(cfg.data));
  } catch (const Error& e) {
    throw DataError(e.what());
  }
}

SolverConfig solver_config(const RunConfig& cfg, StepRule default_rule, std::size_t default_iters) {
  SolverConfig c;
  c.step_rule = default_rule;
  if (cfg.step_rule) c.step_rule = *cfg.step_rule == "newton" ? StepRule::Newton : StepRule::Gradient;
  c.max_iters = cfg.max_iters.value_or(default_iters);
  return c;
}

ReportMeta make_meta(const RunConfig& cfg, const std::string& loss, const std::string& digest) {
  ReportMeta m;
  m.seed = cfg.seed;
  m.loss = loss;
  m.dataset_digest = digest;
  m.config = cfg.to_map();
  m.timestamp = cfg.timestamp;
  return m;
}

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for this subcommand");
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void json_doc(const json& j, bool to_stdout_by_default = true) {
    if (!cfg_.out.empty()) {
      std::ofstream f(cfg_.out);
      if (!f) throw UsageError("cannot write " + cfg_.out);
      f << j.dump(2) << '\n';
    } else if (to_stdout_by_default) {
      out_ << j.dump(2) << '\n';
    }
  }

  // Writes to --csv; stdout when it is "-" or when `fallback` is set and
  // nothing else was requested.
  template <typename F>
  void csv(F&& write, bool fallback) {
    if (cfg_.csv == "-" || (cfg_.csv.empty() && fallback)) {
      write(out_);
    } else if (!cfg_.csv.empty()) {
      std::ofstream f(cfg_.csv);
      if (!f) throw UsageError("cannot write " + cfg_.csv);
      write(f);
    }
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

int solve_primal(const RunConfig& cfg, const Loss& loss, Output& o) {
  const Loaded in = load_problem(cfg, loss);
  const PrimalTrajectory traj = minimize_regularized(in.problem, cfg.lambda, solver_config(cfg, StepRule::Gradient, 100000));
  const Iterate& f = traj.final_iterate();
  json j;
  j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
  j["w"] = vec_json(f.w);
  j["termination"] = std::string(to_string(traj.termination));
  j["iterations"] = f.t;
  j["risk"] = number(f.risk);
  j["objective"] = number(f.objective);
  j["lambda"] = traj.lambda;
  j["l1_norm"] = number(f.l1_norm);
  j["l2_norm"] = number(f.l2_norm);
  o.json_doc(j);
  o.csv(
      [&](std::ostream& os) {
        os << "t,risk,l1_norm,l2_norm\n";
        for (const Iterate& it : traj.iterates) {
          os << it.t << ',' << format_double(it.risk) << ',' << format_double(it.l1_norm) << ','
             << format_double(it.l2_norm) << '\n';
        }
      },
      false);
  const bool capped = traj.termination == Termination::IterationCap || traj.termination == Termination::LineSearchStall;
  return cfg.strict && capped ? kExitSolver : kExitOk;
}

int solve_dual_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  const Loaded in = load_problem(cfg, loss);
  DualConfig dc;
  if (cfg.max_iters) dc.solver.max_iters = *cfg.max_iters;
  const DualSolution d = solve_dual(in.problem, dc);
  json j = to_json(d);
  j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
  o.json_doc(j);
  return kExitOk;
}

int structure_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  const Loaded in = load_problem(cfg, loss);
  const Problem& p = in.problem;
  const DualSolution d = solve_dual(p);
  const DifficultSet ds = difficult_set(p, d);
  const DifficultSet dcan = canonical_difficult_set(p);
  BalanceConfig bc;
  bc.seed = cfg.seed.value_or(0);
  const KernelBasis k_mu = kernel(p.measure(), p.hypotheses());
  const BalanceResult bal_mu = balance(p.measure(), p.hypotheses(), bc);
  json j;
  j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
  j["difficult_set"] = {{"indices", ds.indices}, {"ambiguous", ds.ambiguous}, {"threshold", ds.threshold_used}};
  j["canonical_difficult_set"] = {{"indices", dcan.indices}, {"ambiguous", dcan.ambiguous}};
  j["kernel_dims"] = {{"mu", k_mu.basis.cols()}};
  j["balance"] = {{"mu", {{"value", number(bal_mu.value)}, {"method", std::string(to_string(bal_mu.method))}}}};
  if (!ds.indices.empty()) {
    const FiniteMeasure cond = p.measure().conditional(ds.indices);
    const BalanceResult bal_d = balance(cond, p.hypotheses(), bc);
    j["kernel_dims"]["mu_D"] = kernel(cond, p.hypotheses()).basis.cols();
    j["balance"]["mu_D"] = {{"value", number(bal_d.value)}, {"method", std::string(to_string(bal_d.method))}};
  }
  j["q_bar"] = vec_json(d.q);
  j["provenance"] = std::string(to_string(d.provenance));
  o.json_doc(j);
  return kExitOk;
}

int eta_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  const Loaded in = load_problem(cfg, loss);
  const Problem& p = in.problem;
  const DualSolution d = solve_dual(p);
  const DifficultSet ds = difficult_set(p, d);
  const CondModel bar = eta_bar(p, d, ds);
  const PrimalTrajectory traj = minimize(p, solver_config(cfg, StepRule::Gradient, 100000));
  const CondModel ew = eta_w(p, traj.final_iterate().w);
  o.csv(
      [&](std::ostream& os) {
        os << "id,x,y,q_bar,eta_bar,eta_w_final,in_difficult_set\n";
        for (std::size_t i = 0; i < p.size(); ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          const LabeledPoint& pt = p.measure().point(i);
          os << pt.id << ',';
          for (Eigen::Index k = 0; k < pt.x.size(); ++k) os << (k ? ";" : "") << format_double(pt.x[k]);
          os << ',' << pt.y << ',' << format_double(d.q[ii]) << ',' << format_double(bar.values[ii]) << ','
             << format_double(ew.values[ii]) << ',' << (ds.contains(i) ? 1 : 0) << '\n';
        }
      },
      true);
  if (!cfg.out.empty()) {
    json j;
    j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
    j["l1_distance"] = number(l1_distance(bar, ew, p.measure()));
    j["flagged"] = bar.flagged;
    j["termination"] = std::string(to_string(traj.termination));
    o.json_doc(j, false);
  }
  return kExitOk;
}

std::vector<double> parse_p_grid(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const auto& s : raw) {
    if (s == "inf" || s == "infinity") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw UsageError("bad --p-grid entry '" + s + "'");
    }
  }
  return out;
}

SweepReport audit_sweep(const Problem& p, const SolverConfig& solver, const AuditParams& ap) {
  const DualSolution d = solve_dual(p);
  const PrimalTrajectory traj = minimize(p, solver);
  std::optional<CondModel> bar;
  if (p.loss().member_of_Lb()) bar = eta_bar(p, d, difficult_set(p, d));
  SweepReport r;
  r.kind = "audit";
  r.parameter_name = "t";
  r.loss = std::string(p.loss().name());
  const std::size_t last = traj.final_iterate().t;
  for (const Iterate& it : traj.iterates) {
    if (!(it.t > 0 && (it.t & (it.t - 1)) == 0) && it.t != last) continue;
    SweepRow row;
    row.parameter = static_cast<double>(it.t);
    row.excess_risk = it.risk - d.objective;
    row.zero_one = zero_one_risk(p, it.w);
    if (bar) row.l1_distance = l1_distance(eta_w(p, it.w), *bar, p.measure());
    row.l1_norm = it.l1_norm;
    row.l2_norm = it.l2_norm;
    double violations = 0.0;
    for (AuditRecord a : bound_audit(p, it.w, d, ap)) {
      if (a.applicable && !a.holds) violations += 1.0;
      if (a.name == "Dc_controls.i" && a.applicable) row.extra["mass_S_r"] = a.lhs;
      a.parameters["t"] = static_cast<double>(it.t);
      r.audits.push_back(std::move(a));
    }
    row.extra["violations"] = violations;
    r.rows.push_back(std::move(row));
  }
  return r;
}

int experiment_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  SweepReport report;
  std::string digest;
  const std::string& e = cfg.experiment;
  if (e == "converge") {
    const Loaded in = load_problem(cfg, loss);
    digest = in.digest;
    report = convergence_sweep(in.problem, solver_config(cfg, StepRule::Gradient, 100000));
  } else if (e == "generalize") {
    require_seed(cfg);
    const Loaded in = load_problem(cfg, loss, true);
    digest = in.digest;
    std::mt19937_64 gen(*cfg.seed);
    std::vector<std::uint64_t> seeds(cfg.n_seeds);
    for (auto& s : seeds) s = gen();
    report = generalization_sweep(in.problem, cfg.n_grid, seeds, solver_config(cfg, StepRule::Newton, 500));
  } else if (e == "regpath") {
    require_seed(cfg);
    const Loaded in = load_problem(cfg, loss);
    digest = in.digest;
    RegPathConfig rc;
    rc.p_grid = parse_p_grid(cfg.p_grid);
    rc.splits = cfg.splits;
    rc.seed = *cfg.seed;
    rc.solver = solver_config(cfg, StepRule::Newton, 200);
    report = regularization_sweep(in.problem, rc);
  } else if (e == "zo") {
    if (cfg.epsilon.empty()) throw UsageError("--epsilon is required");
    try {
      report = zo_oscillation(cfg.epsilon, cfg.iters, loss);
    } catch (const ParseError& pe) {
      throw UsageError(pe.what());
    }
    digest = problem_digest(fixtures::zo(Rational::parse(cfg.epsilon).to_double(), loss));
  } else if (e == "audit") {
    require_seed(cfg);
    const Loaded in = load_problem(cfg, loss);
    digest = in.digest;
    AuditParams ap;
    ap.balance.seed = *cfg.seed;
    report = audit_sweep(in.problem, solver_config(cfg, StepRule::Gradient, 100000), ap);
  }
  o.json_doc(report_json(report, make_meta(cfg, report.loss, digest)), false);
  o.csv([&](std::ostream& os) { write_csv(os, report.rows, report.parameter_name); }, cfg.out.empty());
  return kExitOk;
}

int audit_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  require_seed(cfg);
  const Loaded in = load_problem(cfg, loss);
  const Problem& p = in.problem;
  const DualSolution d = solve_dual(p);
  Vector w;
  if (!cfg.weights.empty()) {
    if (cfg.weights.size() != p.dim()) throw UsageError("--weights has the wrong length");
    w = Eigen::Map<const Vector>(cfg.weights.data(), static_cast<Eigen::Index>(cfg.weights.size()));
  } else {
    w = minimize(p, solver_config(cfg, StepRule::Gradient, 100000)).final_iterate().w;
  }
  AuditParams ap;
  ap.balance.seed = *cfg.seed;
  const std::vector<AuditRecord> audits = bound_audit(p, w, d, ap);
  json j;
  j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
  j["w"] = vec_json(w);
  j["audits"] = json::array();
  int violations = 0;
  for (const auto& a : audits) {
    j["audits"].push_back(to_json(a));
    violations += a.applicable && !a.holds;
  }
  j["violations"] = violations;
  o.json_doc(j);
  o.csv([&](std::ostream& os) { write_audit_csv(os, audits); }, false);
  return kExitOk;
}

int validate_cmd(const RunConfig& cfg, const Loss& loss, Output& o) {
  const Loaded in = load_problem(cfg, loss);
  const Problem& p = in.problem;
  std::size_t pos = 0, neg = 0, mirrored = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    (p.measure().point(i).y == 1 ? pos : neg) += 1;
    mirrored += p.mirror()[i].has_value();
  }
  json j;
  j["meta"] = meta_json(make_meta(cfg, std::string(loss.name()), in.digest));
  j["support_size"] = p.size();
  j["dim"] = p.dim();
  j["labels"] = {{"+1", pos}, {"-1", neg}};
  j["mirrored_points"] = mirrored;
  j["total_mass"] = number(p.measure().total_mass());
  o.json_doc(j);
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_data = true) {
  sub->add_option("--loss", cfg.loss, "logistic | exp | hinge")
      ->check(CLI::IsMember({"logistic", "exp", "exponential", "hinge"}));
  if (needs_data) {
    sub->add_option("--data", cfg.data, "dataset path");
    sub->add_option("--format", cfg.format, "libsvm | csv")->check(CLI::IsMember({"libsvm", "csv"}));
    sub->add_option("--label-col", cfg.label_col, "CSV label column (name or 0-based index)");
    sub->add_option("--fixture", cfg.fixture, "mirror | single | margins | difficult | mixed");
    sub->add_flag("--normalize", cfg.normalize, "rescale the measure to total mass 1");
  }
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--out", cfg.out, "JSON output path");
  sub->add_option("--csv", cfg.csv, "CSV output path ('-' for stdout)");
  sub->add_option("--max-iters", cfg.max_iters, "solver iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--step-rule", cfg.step_rule, "gradient | newton")->check(CLI::IsMember({"gradient", "newton"}));
  sub->add_flag("--strict", cfg.strict, "exit 3 when the solver stops at an iteration cap");
  sub->add_flag_callback("--no-timestamp", [&cfg] { cfg.timestamp = false; }, "omit the timestamp from report metadata");
}

}  // namespace

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["subcommand"] = subcommand;
  m["experiment"] = experiment;
  m["data"] = data;
  m["format"] = format;
  m["label_col"] = label_col;
  m["fixture"] = fixture;
  m["loss"] = loss;
  m["step_rule"] = step_rule.value_or("");
  m["max_iters"] = max_iters ? std::to_string(*max_iters) : "";
  m["lambda"] = format_double(lambda);
  m["seed"] = seed ? std::to_string(*seed) : "";
  m["out"] = out;
  m["csv"] = csv;
  m["normalize"] = normalize ? "true" : "false";
  m["strict"] = strict ? "true" : "false";
  m["epsilon"] = epsilon;
  m["iters"] = std::to_string(iters);
  m["n_grid"] = join(n_grid);
  m["p_grid"] = join(p_grid);
  m["n_seeds"] = std::to_string(n_seeds);
  m["splits"] = std::to_string(splits);
  std::vector<std::string> ws;
  for (double v : weights) ws.push_back(format_double(v));
  m["weights"] = join(ws);
  return m;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Risk, duality and conditional probability estimation over linear classes", "rdl"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  auto* primal = app.add_subcommand("solve-primal", "minimize the (regularized) risk");
  add_common(primal, cfg);
  primal->add_option("--lambda", cfg.lambda, "l2 penalty lambda/2 ||w||^2")->check(CLI::NonNegativeNumber);
  add_common(app.add_subcommand("solve-dual", "maximize the dual"), cfg);
  add_common(app.add_subcommand("structure", "difficult set, kernel and balance"), cfg);
  add_common(app.add_subcommand("eta", "per-point conditional probability models"), cfg);
  auto* audit = app.add_subcommand("audit", "bound audits at one weighting");
  add_common(audit, cfg);
  audit->add_option("--weights", cfg.weights, "weighting to audit (default: the solver's final iterate)")
      ->delimiter(',');
  add_common(app.add_subcommand("validate-data", "load a dataset and summarize it"), cfg);

  auto* exp = app.add_subcommand("experiment", "experiment suites");
  exp->require_subcommand(1, 1);
  for (const char* name : {"converge", "generalize", "regpath", "zo", "audit"}) {
    auto* s = exp->add_subcommand(name);
    add_common(s, cfg, std::string(name) != "zo");
    s->callback([&cfg, name] { cfg.experiment = name; });
  }
  exp->get_subcommand("zo")->add_option("--epsilon", cfg.epsilon, "epsilon in [0, 1), decimal or p/q");
  exp->get_subcommand("zo")->add_option("--iters", cfg.iters, "number of iterates")->check(CLI::PositiveNumber);
  exp->get_subcommand("generalize")->add_option("--n-grid", cfg.n_grid, "sample sizes")->delimiter(',');
  exp->get_subcommand("generalize")->add_option("--n-seeds", cfg.n_seeds, "seeds per sample size")
      ->check(CLI::PositiveNumber);
  exp->get_subcommand("regpath")->add_option("--p-grid", cfg.p_grid, "exponents p, lambda = n^-p")->delimiter(',');
  exp->get_subcommand("regpath")->add_option("--splits", cfg.splits, "train/test splits")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();

  try {
    const Loss loss = Loss::parse(cfg.loss);
    Output o(cfg, out);
    if (cfg.subcommand == "solve-primal") return solve_primal(cfg, loss, o);
    if (cfg.subcommand == "solve-dual") return solve_dual_cmd(cfg, loss, o);
    if (cfg.subcommand == "structure") return structure_cmd(cfg, loss, o);
    if (cfg.subcommand == "eta") return eta_cmd(cfg, loss, o);
    if (cfg.subcommand == "audit") return audit_cmd(cfg, loss, o);
    if (cfg.subcommand == "validate-data") return validate_cmd(cfg, loss, o);
    return experiment_cmd(cfg, loss, o);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConvergenceError& e) {
    err << "solver did not converge: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace rdl::cli
