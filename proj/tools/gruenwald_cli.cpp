#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"
#include "gruenwald/harness.hpp"

namespace {

using namespace gruenwald;

constexpr int kOk = 0;
constexpr int kVerdictFailure = 1;
constexpr int kUsage = 2;

struct Common {
  std::string grid = "-5:5:1/97";
  double radius = TruncationPolicy{}.radius;
  double tail_tol = TruncationPolicy{}.tail_tolerance;
  std::string format = "csv";
  std::string out;

  TruncationPolicy policy() const {
    TruncationPolicy p;
    p.radius = radius;
    p.tail_tolerance = tail_tol;
    p.validate();
    return p;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_grid = true) {
  if (with_grid) cmd->add_option("--grid", c.grid, "evaluation grid min:max:step")->capture_default_str();
  cmd->add_option("--radius", c.radius, "truncation radius (node-gap units of pi)")->capture_default_str();
  cmd->add_option("--tail-tol", c.tail_tol, "flag tail estimates above this")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

template <class Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DomainError("cannot open " + path + " for writing");
  write(file);
  if (!file) throw Error("write to " + path + " failed");
}

template <class Doc>
void emit_doc(const Common& c, const Doc& doc) {
  const OutputFormat f = parse_format(c.format);
  emit(c.out, [&](std::ostream& os) {
    if (f == OutputFormat::Csv) {
      write_csv(os, doc);
    } else {
      write_json(os, doc);
    }
  });
}

int report_verdicts(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    std::cerr << (v.pass ? "PASS " : "FAIL ") << v.rule;
    if (!v.detail.empty()) std::cerr << " (" << v.detail << ')';
    std::cerr << '\n';
  }
  return all_pass(verdicts) ? kOk : kVerdictFailure;
}

OperatorKind parse_op(const std::string& s) {
  if (s == "G") return OperatorKind::G;
  if (s == "H") return OperatorKind::H;
  throw DomainError("operator must be G or H");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-node interpolation experiments for homogeneous and de Branges weights"};
  app.require_subcommand(1);

  // zeros
  double z_nu = 0.0;
  std::string z_kind = "A";
  std::size_t z_count = 10;
  std::string z_out;
  auto* zeros = app.add_subcommand("zeros", "positive zeros of A_nu (J_nu) or B_nu (J_{nu+1})");
  zeros->add_option("--nu", z_nu, "order, > -1")->required();
  zeros->add_option("--kind", z_kind, "A or B")->check(CLI::IsMember({"A", "B"}))->capture_default_str();
  zeros->add_option("--count", z_count, "number of zeros")->check(CLI::PositiveNumber)->capture_default_str();
  zeros->add_option("--out", z_out, "output file (default stdout)");

  // converge
  ExperimentConfig cfg;
  Common c_conv;
  std::string c_op;
  auto* converge = app.add_subcommand("converge", "weighted sup error along a tau ladder");
  converge->add_option("--experiment", cfg.experiment, "theorem1, remark1 or theorem2")->capture_default_str();
  converge->add_option("--nu", cfg.nu, "order, > -1")->capture_default_str();
  converge->add_option("--tau-ladder", cfg.tau_ladder, "comma separated, increasing")->delimiter(',');
  converge->add_option("--target", cfg.target, "target function id")->capture_default_str();
  converge->add_option("--op", c_op, "G or H (default: the one matching nu)");
  converge->add_option("--family", cfg.family, "Hermite-Biehler family for theorem2")->capture_default_str();
  converge->add_option("--samples", cfg.samples_path, "x,value CSV for custom-samples");
  converge->add_option("--final-threshold", cfg.final_threshold, "final-error rule threshold")->capture_default_str();
  add_common(converge, c_conv);

  // kernel-check
  double k_tau = 4.0;
  Common c_kern;
  auto* kernel = app.add_subcommand("kernel-check", "de Branges identities for the sinh example");
  kernel->add_option("--tau", k_tau, "type of E_tau")->capture_default_str();
  add_common(kernel, c_kern);

  // probe
  std::string p_exp;
  double p_nu = 0.0;
  std::vector<double> p_taus;
  Common c_probe;
  c_probe.grid = "-10:10:1/97";
  auto* probe = app.add_subcommand("probe", "wrong-operator, cos-case and dilation probes");
  probe->add_option("experiment", p_exp, "wrong-operator, cos-case or dilation-failure")
      ->required()
      ->check(CLI::IsMember({"wrong-operator", "cos-case", "dilation-failure"}));
  probe->add_option("--nu", p_nu, "order for wrong-operator")->capture_default_str();
  probe->add_option("--tau,--tau-ladder", p_taus, "tau values, comma separated")->delimiter(',');
  add_common(probe, c_probe);

  // eval
  double e_nu = 0.0, e_tau = 4.0, e_x = 0.0;
  std::string e_target = "gaussian", e_op;
  Common c_eval;
  auto* eval = app.add_subcommand("eval", "one operator value");
  eval->add_option("--nu", e_nu, "order, > -1")->capture_default_str();
  eval->add_option("--tau", e_tau, "tau")->capture_default_str();
  eval->add_option("--x", e_x, "evaluation point")->capture_default_str();
  eval->add_option("--target", e_target, "target function id")->capture_default_str();
  eval->add_option("--op", e_op, "G or H (default: the one matching nu)");
  add_common(eval, c_eval, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (zeros->parsed()) {
      const Order order(z_nu);
      const ZeroTable t = zero_table(order, z_kind == "A" ? ZeroKind::A : ZeroKind::B, z_count);
      emit(z_out, [&](std::ostream& os) { t.write_csv(os); });
      return kOk;
    }
    if (converge->parsed()) {
      cfg.grid = GridSpec::parse(c_conv.grid);
      cfg.policy = c_conv.policy();
      if (!c_op.empty()) cfg.op = parse_op(c_op);
      const ConvergenceReport report = run_convergence(cfg);
      emit_doc(c_conv, report);
      return report_verdicts(evaluate_verdicts(report));
    }
    if (kernel->parsed()) {
      if (!(k_tau > 0.0) || !std::isfinite(k_tau)) throw DomainError("tau must be positive");
      const DataTable t = run_kernel_check(k_tau, GridSpec::parse(c_kern.grid), c_kern.policy());
      emit_doc(c_kern, t);
      return report_verdicts(t.verdicts);
    }
    if (probe->parsed()) {
      const TruncationPolicy policy = c_probe.policy();
      DataTable t;
      if (p_exp == "wrong-operator") {
        if (p_taus.empty()) p_taus = {5.0, 20.0};
        t = run_wrong_operator(p_nu, p_taus, GridSpec::parse(c_probe.grid), policy);
      } else if (p_exp == "cos-case") {
        if (p_taus.empty()) p_taus = {5.0, 20.0};
        t = run_cos_case(p_taus, GridSpec::parse(c_probe.grid), policy);
      } else {
        if (p_taus.empty()) p_taus = {4.0, 16.0, 64.0, 256.0};
        t = run_dilation_failure(p_taus, policy);
      }
      emit_doc(c_probe, t);
      return report_verdicts(t.verdicts);
    }
    if (eval->parsed()) {
      const Order order(e_nu);
      const OperatorKind kind = e_op.empty() ? natural_kind(order) : parse_op(e_op);
      const TargetFunction f = make_target(e_target, order);
      const GruenwaldOperator op(order, kind, e_tau, std::fabs(e_x), c_eval.policy());
      const SeriesValue v = op.apply(f.f, e_x);
      DataTable t;
      t.experiment = "eval";
      t.columns = {"nu", "tau", "x", "value", "target", "tail_estimate", "nodes_used"};
      t.rows.push_back({e_nu, e_tau, e_x, v.value.real(), f(e_x), v.tail_estimate,
                        static_cast<double>(v.nodes_used)});
      emit_doc(c_eval, t);
      return kOk;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerdictFailure;
  }
  return kUsage;
}
