// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"
#include "gruenwald/harness.hpp"
#include "oracles.hpp"

using namespace gruenwald;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> points_without_origin(const GridSpec& g) {
  std::vector<double> xs;
  for (double x : g.points()) {
    if (x != 0.0) xs.push_back(x);
  }
  return xs;
}

Outcome special_functions() {
  Outcome o;
  double worst_zero = 0.0;
  for (double nu : {0.0, 1.0}) {
    const auto ref = oracle::bessel_zeros(nu, 10);
    const ZeroTable t = zero_table(Order(nu), ZeroKind::A, 10);
    for (std::size_t i = 0; i < 10; ++i) worst_zero = std::max(worst_zero, std::fabs(t.zeros()[i] - ref[i]));
  }
  o.require(worst_zero < 1e-10, "J0/J1 zeros within 1e-10 (max " + fmt(worst_zero) + ")");

  double worst_cs = 0.0;
  const Order half(-0.5);
  for (int k = 0; k <= 4000; ++k) {
    const double x = -20.0 + 0.01 * k;
    worst_cs = std::max({worst_cs, std::fabs(a_nu_jet(half, x).value - std::cos(x)),
                         std::fabs(b_nu_jet(half, x).value - std::sin(x))});
  }
  o.require(worst_cs < 1e-12, "A=cos, B=sin within 1e-12 (max " + fmt(worst_cs) + ")");

  double worst_fd = 0.0;
  for (double nu : {-0.75, 0.0, 0.7, 2.5}) {
    const Order order(nu);
    for (cplx z : {cplx(0.8, 0.0), cplx(3.1, 0.4), cplx(-7.5, 1.0), cplx(14.0, -0.6), cplx(30.0, 0.0)}) {
      const cplx fd = oracle::derivative([&](double h) { return a_nu(order, z + h); }, 0.0);
      worst_fd = std::max(worst_fd, std::abs(a_nu_prime(order, z) - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  o.require(worst_fd < 1e-7, "a_nu_prime vs finite differences within 1e-7 (max " + fmt(worst_fd) + ")");
  o.note("zeros " + fmt(worst_zero) + ", cos/sin " + fmt(worst_cs) + ", a' " + fmt(worst_fd));
  return o;
}

Outcome node_identities() {
  Outcome o;
  double worst_a = 0.0, worst_b = 0.0;
  for (double nu : {-0.9, -0.25, 0.0, 0.7, 2.5}) {
    const Order order(nu);
    const double p = order.weight_exponent();
    const ZeroTable a = zero_table(order, ZeroKind::A, 50);
    const ZeroTable b = zero_table(order, ZeroKind::B, 50);
    for (std::size_t i = 0; i < 50; ++i) {
      const double t = a.zeros()[i];
      const Jet ja = a_nu_jet(order, t);
      worst_a = std::max(worst_a, std::fabs(ja.d2 / ja.d1 + p / t) / std::fabs(p / t));
      const double s = b.zeros()[i];
      const Jet jb = b_nu_jet(order, s);
      const double residual = jb.d2 + p / s * jb.d1 + (1 - p / (s * s)) * jb.value;
      worst_b = std::max(worst_b, std::fabs(residual / jb.d1));
    }
  }
  o.require(worst_a < 1e-9, "A''/A' = -(2nu+1)/t (max rel " + fmt(worst_a) + ")");
  o.require(worst_b < 1e-9, "B-node ODE residual (max rel " + fmt(worst_b) + ")");
  o.note("A " + fmt(worst_a) + ", B " + fmt(worst_b));
  return o;
}

Outcome interpolation_positivity() {
  Outcome o;
  const auto f = [](double x) { return std::exp(-x * x) * (1.0 + 0.3 * x); };
  const auto nonneg = [](double x) { return x * x * std::exp(-x * x / 4.0); };
  double worst_interp = 0.0, lowest = 0.0;
  for (double nu : {-0.75, 0.0, 0.7}) {
    const Order order(nu);
    const double tau = 3.0;
    for (OperatorKind kind : {OperatorKind::G, OperatorKind::H}) {
      const GruenwaldOperator op(order, kind, tau, 10.0);
      for (const KernelNode& n : op.kernel().nodes()) {
        const double x = n.t / tau;
        if (std::fabs(x) > 6.0) continue;
        const double v = op.apply(f, x).value.real();
        worst_interp = std::max(worst_interp, std::fabs(v - f(x)) / std::max(std::fabs(f(x)), 1e-20));
      }
      for (int k = 0; k < 1000; ++k) {
        const double x = -10.0 + 20.0 * k / 999.0;
        lowest = std::min(lowest, op.apply(nonneg, x).value.real());
      }
    }
    const MinorantSeries L(order, tau, 6.0);
    const HomogeneousWeight w(order);
    for (const KernelNode& n : L.op().kernel().nodes()) {
      const double x = n.t / tau;
      if (std::fabs(x) > 6.0 || x == 0.0) continue;
      worst_interp = std::max(worst_interp, std::fabs(L(x) - w.reciprocal(x)) / w.reciprocal(x));
    }
  }
  o.require(worst_interp < 1e-9, "node reproduction (max rel " + fmt(worst_interp) + ")");
  o.require(lowest >= 0.0, "nonnegative series (min " + fmt(lowest) + ")");
  o.note("node rel " + fmt(worst_interp) + ", min " + fmt(lowest));
  return o;
}

Outcome minorant_suite() {
  Outcome o;
  const auto xs = points_without_origin(GridSpec{-10.0, 10.0, 1.0 / 97.0});
  double worst_excess = -1.0, lowest = 1.0, worst_scale = 0.0, worst_spread = 0.0;
  for (double nu : {-0.75, 0.0, 0.7}) {
    const Order order(nu);
    const HomogeneousWeight w(order);
    std::vector<double> ratios;
    for (double tau : {2.0, 8.0, 32.0}) {
      const MinorantSeries L(order, tau, 10.0);
      for (double x : xs) {
        const double v = L(x);
        worst_excess = std::max(worst_excess, (v - w.reciprocal(x)) / w.reciprocal(x));
        lowest = std::min(lowest, v * w(x));
      }
      ratios.push_back(max_conditioned_ratio(order, lemma_error_shape(order, tau, xs)));
      for (double x : {0.05, 0.3, 1.7, -4.1}) {
        const double lhs = minorant_L(order, tau, x);
        const double rhs = std::pow(tau, order.weight_exponent()) * minorant_L(order, 1.0, tau * x);
        worst_scale = std::max(worst_scale, std::fabs(lhs - rhs) / std::fabs(lhs));
      }
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    worst_spread = std::max(worst_spread, *lo > 0.0 ? *hi / *lo : INFINITY);
  }
  // L touches 1/w at the nodes; 1e-8 covers rounding of the two sides there
  o.require(worst_excess <= 1e-8, "L <= 1/w (max rel excess " + fmt(worst_excess) + ")");
  o.require(lowest >= 0.0, "L >= 0 (min Lw " + fmt(lowest) + ")");
  o.require(worst_spread <= 3.0, "minorant error ratio within factor 3 (max spread " + fmt(worst_spread) + ")");
  o.require(worst_scale <= 1e-10, "scaling law (max rel " + fmt(worst_scale) + ")");
  o.note("excess " + fmt(worst_excess) + ", spread " + fmt(worst_spread) + ", scaling " + fmt(worst_scale));
  return o;
}

std::string rows_text(const ConvergenceReport& r) {
  std::string s;
  for (const auto& row : r.rows) s += (s.empty() ? "" : " ") + fmt(row.sup_error);
  return s;
}

Outcome homogeneous_convergence() {
  Outcome o;
  struct Case {
    double nu;
    const char* target;
  };
  for (const Case c : {Case{0.0, "gaussian"}, Case{0.7, "gaussian"}, Case{-0.75, "gaussian-times-x2"}}) {
    ExperimentConfig cfg;
    cfg.nu = c.nu;
    cfg.target = c.target;
    const ConvergenceReport r = run_convergence(cfg);
    const auto v = evaluate_verdicts(r);
    for (const auto& verdict : v) {
      o.require(verdict.pass, "nu=" + fmt(c.nu) + " " + verdict.rule + " (" + verdict.detail + ")");
    }
    o.note("nu=" + fmt(c.nu) + ": " + rows_text(r));
  }
  return o;
}

Outcome negative_controls() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.experiment = "remark1";
  cfg.target = "recip-weight";
  cfg.tau_ladder = {4.0, 16.0, 64.0, 256.0};
  const ConvergenceReport r = run_convergence(cfg);
  for (const auto& v : evaluate_verdicts(r)) o.require(v.pass, "1/w persistence " + v.rule + " (" + v.detail + ")");
  o.note("recip-weight: " + rows_text(r));

  const DataTable t = run_wrong_operator(0.0, {5.0, 20.0}, GridSpec{-10.0, 10.0, 1.0 / 97.0});
  for (const auto& v : t.verdicts) o.require(v.pass, "H_0 " + v.rule + " (" + v.detail + ")");
  return o;
}

Outcome debranges_suite() {
  Outcome o;
  for (double tau : {1.0, 4.0, 16.0}) {
    const DataTable t = run_kernel_check(tau, GridSpec{-5.0, 5.0, 1.0 / 97.0});
    for (const auto& v : t.verdicts) {
      o.require(v.pass, "tau=" + fmt(tau) + " " + v.rule + " (" + v.detail + ")");
      if (!v.detail.empty()) o.note("tau=" + fmt(tau) + " " + v.detail);
    }
  }
  ExperimentConfig cfg;
  cfg.experiment = "theorem2";
  cfg.target = "poisson-recip";
  const ConvergenceReport r = run_convergence(cfg);
  for (const auto& v : evaluate_verdicts(r)) o.require(v.pass, "sinh convergence " + v.rule + " (" + v.detail + ")");
  o.require(!r.rows.empty() && r.rows.back().tau == 64.0, "sinh ladder reaches tau=64");
  o.note("sinh: " + rows_text(r));
  return o;
}

Outcome probes() {
  Outcome o;
  const DataTable cos = run_cos_case({5.0, 20.0}, GridSpec{-10.0, 10.0, 1.0 / 97.0});
  for (const auto& v : cos.verdicts) o.require(v.pass, v.rule + " (" + v.detail + ")");
  const DataTable dil = run_dilation_failure({4.0, 16.0, 64.0, 256.0});
  for (const auto& v : dil.verdicts) o.require(v.pass, "dilation " + v.rule);
  std::string s;
  for (const auto& row : dil.rows) s += (s.empty() ? "" : " ") + fmt(row[1]);
  o.note("cos " + fmt(cos.rows[0][1]) + " " + fmt(cos.rows[1][1]) + ", dilation " + s);
  return o;
}

Outcome type_diagnostic() {
  Outcome o;
  const double ladder[] = {10.0, 20.0, 40.0, 80.0};
  for (double tau : {2.0, 4.0}) {
    const Order order(0.0);
    const TargetFunction g = make_target("gaussian", order);
    const GruenwaldOperator op(order, OperatorKind::G, tau, 1.0);
    const double t = estimate_type([&](cplx z) { return op.apply(g.f, z).value; }, ladder);
    o.require(std::fabs(t - 2.0 * tau) <= 0.05 * 2.0 * tau, "G type at tau=" + fmt(tau) + " is " + fmt(t));
    o.note("G tau=" + fmt(tau) + ": " + fmt(t));
  }
  for (double tau : {2.0, 4.0}) {
    const SinhExample ex = example_sinh(tau);
    const double t = estimate_type(ex.hb.A, ladder);
    o.require(std::fabs(t - tau) <= 0.05 * tau, "A_tau type at tau=" + fmt(tau) + " is " + fmt(t));
    o.note("A tau=" + fmt(tau) + ": " + fmt(t));
  }
  return o;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

Outcome determinism() {
  Outcome o;
  const std::string cmd = std::string(GRUENWALD_CLI_PATH) +
                          " converge --nu 0.7 --tau-ladder 4,8,16 --grid -5:5:1/97 --format csv 2>/dev/null";
  int s1 = 0, s2 = 0;
  const std::string a = capture(cmd, s1);
  const std::string b = capture(cmd, s2);
  o.require(!a.empty(), "cli produced output");
  o.require(a == b, "byte-identical csv");
  o.note(std::to_string(a.size()) + " bytes");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"special functions", special_functions},
      {"node identities", node_identities},
      {"interpolation and positivity", interpolation_positivity},
      {"minorant suite", minorant_suite},
      {"weighted convergence, homogeneous", homogeneous_convergence},
      {"negative controls", negative_controls},
      {"de Branges suite", debranges_suite},
      {"cos case and dilation probes", probes},
      {"exponential type", type_diagnostic},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first;
    for (const auto& n : o.notes) std::cout << " | " << n;
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
