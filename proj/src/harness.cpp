#include "gruenwald/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <string>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"

namespace gruenwald {

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const std::map<double, double>> load_samples(const std::string& path) {
  if (path.empty()) throw DomainError("custom-samples needs a samples file");
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open samples file " + path);
  auto table = std::make_shared<std::map<double, double>>();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("samples line " + std::to_string(lineno) + " lacks a comma");
    try {
      const double x = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      (*table)[x] = v;
    } catch (const std::logic_error&) {
      if (lineno == 1) continue;  // header
      throw DomainError("samples line " + std::to_string(lineno) + " is not numeric");
    }
  }
  if (table->size() < 2) throw DomainError("samples file needs at least two points");
  return table;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw DomainError("format must be csv or json");
}

void ExperimentConfig::validate() const {
  if (experiment != "theorem1" && experiment != "remark1" && experiment != "theorem2") {
    throw DomainError("unknown experiment '" + experiment + "'");
  }
  if (tau_ladder.empty()) throw DomainError("tau ladder is empty");
  for (double t : tau_ladder) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tau values must be positive");
  }
  if (!strictly_increasing(tau_ladder)) throw DomainError("tau ladder must be strictly increasing");
  grid.validate();
  policy.validate();
  const auto cat = target_catalog();
  if (std::find(cat.begin(), cat.end(), target) == cat.end()) throw DomainError("unknown target '" + target + "'");
  if (experiment == "theorem2" && family != "sinh") throw DomainError("unknown family '" + family + "'");
  if (experiment != "theorem2") (void)Order(nu);
}

std::vector<std::string> target_catalog() {
  return {"gaussian", "gaussian-times-x2", "recip-weight", "poisson-recip", "constant-one", "custom-samples"};
}

TargetFunction make_target(const std::string& id, const Order& order, const std::string& samples_path) {
  const double p = order.classical() ? 0.0 : order.weight_exponent();
  TargetFunction t;
  t.name = id;
  if (id == "gaussian") {
    t.f = [](double x) { return std::exp(-x * x); };
    // f w ~ |x|^p at the origin
    t.flags = {p >= 0, p >= 0, p > 0};
  } else if (id == "gaussian-times-x2") {
    t.f = [](double x) { return x * x * std::exp(-x * x); };
    t.flags = {true, true, p + 2 > 0};
  } else if (id == "recip-weight") {
    const HomogeneousWeight w(order);
    t.f = [w](double x) { return w.reciprocal(x); };
    t.origin_limit = 1.0;
    t.flags = {true, true, false};
  } else if (id == "poisson-recip") {
    t.f = [](double x) { return 1.0 / (x * x + 1.0); };
    // f w ~ |x|^{p-2} at infinity, |x|^p at the origin
    t.flags = {p >= 0 && p <= 2, p >= 0 && p <= 2, p > 0};
  } else if (id == "constant-one") {
    t.f = [](double) { return 1.0; };
    t.flags = {p == 0, p == 0, false};
  } else if (id == "custom-samples") {
    auto table = load_samples(samples_path);
    t.f = [table](double x) {
      const auto hi = table->lower_bound(x);
      if (hi == table->end()) throw MissingSampleError(x);
      if (hi->first == x) return hi->second;
      if (hi == table->begin()) throw MissingSampleError(x);
      const auto lo = std::prev(hi);
      const double s = (x - lo->first) / (hi->first - lo->first);
      return lo->second + s * (hi->second - lo->second);
    };
  } else {
    throw DomainError("unknown target '" + id + "'");
  }
  return t;
}

ConvergenceReport run_convergence(const ExperimentConfig& config) {
  config.validate();
  ConvergenceReport report;
  if (config.experiment == "theorem2") {
    const Order unweighted(-0.5);
    const TargetFunction target = make_target(config.target, unweighted, config.samples_path);
    const double tau_min = config.tau_ladder.front();
    report = theorem2_convergence(sinh_setup(config.target, target.f, std::min(1.0, tau_min)), config.tau_ladder,
                                  config.grid, config.policy);
    report.rules = {{VerdictRule::Kind::StrictlyDecreasing, 0.0},
                    {VerdictRule::Kind::FinalBelow, config.final_threshold}};
    return report;
  }

  const Order order(config.nu);
  const OperatorKind kind = config.op.value_or(natural_kind(order));
  const TargetFunction target = make_target(config.target, order, config.samples_path);
  report.experiment = config.experiment;
  report.target = config.target;
  report.operator_name = to_string(kind);
  report.nu = config.nu;
  report.grid = config.grid;
  report.radius = config.policy.radius;
  report.tail_tolerance = config.policy.tail_tolerance;
  if (config.experiment == "remark1") {
    report.rules = {{VerdictRule::Kind::Persists, config.persist_factor}};
  } else {
    report.rules = {{VerdictRule::Kind::StrictlyDecreasing, 0.0},
                    {VerdictRule::Kind::FinalBelow, config.final_threshold}};
    const AdmissibilityReport adm = check_admissibility(order, target, config.grid);
    if (!adm.ok()) {
      report.failures.push_back("declared admissibility of " + config.target + " fails the grid spot check");
    }
  }
  for (double tau : config.tau_ladder) {
    const SupError e = sup_error(order, target, tau, config.grid, kind, config.policy);
    report.rows.push_back({tau, e.value, e.argmax, e.nodes_used, e.tail_estimate});
  }
  return report;
}

DataTable run_kernel_check(double tau, const GridSpec& grid, const TruncationPolicy& policy) {
  const SinhExample ex = example_sinh(tau);
  const auto xs = grid.points();
  const double max_x = std::max(std::fabs(grid.min), std::fabs(grid.max));
  const DeBrangesOperator op(ex.hb, 0.0, max_x, ex.phase_C, policy);
  const auto Kdiag = [&ex](double x) { return kernel_K(ex.hb, x, x).real(); };

  DataTable t;
  t.experiment = "kernel-check";
  t.columns = {"tau", "x", "K_diag", "fejer_series", "fejer_rel_residual", "phase_rel_residual",
               "sandwich", "sandwich_lo", "sandwich_hi"};
  double worst_fejer = 0.0, worst_phase = 0.0;
  bool sandwich_ok = true;
  const double lo = ex.sandwich_lo(), hi = ex.sandwich_hi();
  for (double x : xs) {
    const double k = Kdiag(x);
    const double series = op.apply(Kdiag, x).value.real();
    const double fejer = std::fabs(series - k) / k;
    const double phase = std::fabs(kPi * k - ex.phase_deriv(x) * std::norm(ex.E(x))) / (kPi * k);
    const double sw = (x * x + 1.0) * std::norm(ex.E(x));
    worst_fejer = std::max(worst_fejer, fejer);
    worst_phase = std::max(worst_phase, phase);
    if (!(sw >= lo * (1 - 1e-13) && sw <= hi * (1 + 1e-13))) sandwich_ok = false;
    t.rows.push_back({tau, x, k, series, fejer, phase, sw, lo, hi});
  }
  t.verdicts.push_back({"fejer-identity < 1e-6", worst_fejer < 1e-6, "max=" + format_double(worst_fejer)});
  t.verdicts.push_back({"pi K = phi'|E|^2 < 1e-10", worst_phase < 1e-10, "max=" + format_double(worst_phase)});
  t.verdicts.push_back({"tanh <= (x^2+1)|E|^2 <= coth", sandwich_ok, ""});
  return t;
}

DataTable run_wrong_operator(double nu, const std::vector<double>& taus, const GridSpec& grid,
                             const TruncationPolicy& policy) {
  const Order order(nu);
  DataTable t;
  t.experiment = "wrong-operator";
  t.columns = {"nu", "tau", "x", "op_value", "reciprocal", "excess"};
  for (double tau : taus) {
    try {
      const Witness w = wrong_operator_probe(order, tau, grid, policy);
      t.rows.push_back({nu, tau, w.x, w.op_value, w.reciprocal, w.excess()});
      t.verdicts.push_back({"witness at tau=" + format_double(tau), true, "x=" + format_double(w.x)});
    } catch (const HypothesisError& e) {
      t.verdicts.push_back({"witness at tau=" + format_double(tau), false, e.what()});
    }
  }
  return t;
}

DataTable run_cos_case(const std::vector<double>& taus, const GridSpec& grid, const TruncationPolicy& policy) {
  DataTable t;
  t.experiment = "cos-case";
  t.columns = {"tau", "max_abs_p", "argmax"};
  for (double tau : taus) {
    const CosCaseResult r = cos_case_probe(tau, grid, policy);
    t.rows.push_back({tau, r.max_abs_p, r.argmax});
    t.verdicts.push_back({"|p| <= 2.05 at tau=" + format_double(tau), r.max_abs_p <= 2.05,
                          "max=" + format_double(r.max_abs_p)});
  }
  return t;
}

DataTable run_dilation_failure(const std::vector<double>& taus, const TruncationPolicy& policy) {
  DataTable t;
  t.experiment = "dilation-failure";
  t.columns = {"tau", "value", "exact", "control"};
  const auto values = dilation_failure(taus, policy);
  const auto control = dilation_control(taus, policy);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    t.rows.push_back({taus[i], values[i], dilation_failure_exact(taus[i]), control[i]});
  }
  t.verdicts.push_back({"strictly increasing", values.size() >= 2 && strictly_increasing(values), ""});
  const bool doubled = values.size() >= 2 && values.back() > 2.0 * values.front();
  t.verdicts.push_back({"last > 2 first", doubled, ""});
  return t;
}

}  // namespace gruenwald
