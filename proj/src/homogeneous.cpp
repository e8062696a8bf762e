#include "gruenwald/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "gruenwald/errors.hpp"

namespace gruenwald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
}

void require_nonclassical(const Order& order, const char* what) {
  if (order.classical()) throw DomainError(std::string(what) + " requires nu != -1/2");
}

ZeroKind zero_kind(OperatorKind kind) { return kind == OperatorKind::G ? ZeroKind::A : ZeroKind::B; }

GruenwaldKernel classical_kernel(OperatorKind kind, double tau, double reach) {
  const auto kmax = static_cast<long long>(std::ceil(reach / kPi)) + 2;
  std::vector<KernelNode> nodes;
  nodes.reserve(static_cast<std::size_t>(2 * kmax + 2));
  if (kind == OperatorKind::G) {
    // zeros of cos: (k + 1/2) pi, cos' = -sin = -(-1)^k
    for (long long k = -kmax - 1; k <= kmax; ++k) {
      nodes.push_back({(static_cast<double>(k) + 0.5) * kPi, (k % 2 == 0) ? -1.0 : 1.0, 0.0});
    }
    const double cover = (static_cast<double>(kmax) + 0.5) * kPi;
    return GruenwaldKernel(std::move(nodes), [](cplx w) { return std::cos(w); }, tau, 1.0, -cover, cover);
  }
  for (long long k = -kmax; k <= kmax; ++k) {
    nodes.push_back({static_cast<double>(k) * kPi, (k % 2 == 0) ? 1.0 : -1.0, 0.0});
  }
  const double cover = static_cast<double>(kmax) * kPi;
  return GruenwaldKernel(std::move(nodes), [](cplx w) { return std::sin(w); }, tau, 1.0, -cover, cover);
}

// r^{-p} - 1 over 1 - r^2, continued by its limit p/2 at r = 1.
double bound_ratio(double p, double abs_x, double a) {
  if (abs_x == a) return 0.5 * p;
  const double r = abs_x / a;
  const double one_minus_r = (a - abs_x) / a;
  return std::expm1(-p * std::log(r)) / (one_minus_r * (1.0 + r));
}

double first_node(const Order& order) {
  return zero_table(order, zero_kind(natural_kind(order)), 1).zeros()[0];
}

double shape_with_node(const Order& order, double tau, double x, double eta) {
  const double p = order.weight_exponent();
  const double a = eta / (2.0 * tau);
  const double ax = std::fabs(x);
  const double base = std::pow(a, -p) / ((tau * a) * (tau * a));
  if (order.regime() == Regime::G) {
    if (x == 0.0) return kInf;
    const double s = a_nu_jet(order, tau * x).value;
    return s * s * base * bound_ratio(p, ax, a);
  }
  double b_over = 0.0;  // B_nu(tau x) / (tau x)
  if (x == 0.0) {
    b_over = 1.0 / (2.0 * (order.nu() + 1.0));
    return b_over * b_over * base * 2.0;
  }
  b_over = b_nu_jet(order, tau * x).value / (tau * x);
  return b_over * b_over * base * (1.0 - bound_ratio(p, ax, a));
}

double max_abs(const GridSpec& grid) { return std::max(std::fabs(grid.min), std::fabs(grid.max)); }

// (f w)(x) including the origin convention used for weighted errors.
double fw_value(const Order& order, const TargetFunction& f, double x) {
  const HomogeneousWeight w(order);
  if (x != 0.0 || order.classical()) return f(x) * w(x);
  if (f.origin_limit) return *f.origin_limit;
  const double f0 = f(0.0);
  if (order.regime() == Regime::G || f0 == 0.0) return 0.0;
  return f0 > 0 ? kInf : -kInf;
}

}  // namespace

const char* to_string(OperatorKind kind) noexcept { return kind == OperatorKind::G ? "G" : "H"; }

double HomogeneousWeight::operator()(double x) const {
  if (order_.classical()) return 1.0;
  const double p = order_.weight_exponent();
  if (x == 0.0) return p > 0 ? 0.0 : kInf;
  return std::pow(std::fabs(x), p);
}

double HomogeneousWeight::reciprocal(double x) const {
  if (order_.classical()) return 1.0;
  const double p = order_.weight_exponent();
  if (x == 0.0) return p > 0 ? kInf : 0.0;
  return std::pow(std::fabs(x), -p);
}

OperatorKind natural_kind(const Order& order) {
  return order.regime() == Regime::H ? OperatorKind::H : OperatorKind::G;
}

GruenwaldKernel homogeneous_kernel(const Order& order, OperatorKind kind, double tau, double max_abs_x,
                                   const TruncationPolicy& policy) {
  require_tau(tau);
  policy.validate();
  if (!(max_abs_x >= 0.0) || !std::isfinite(max_abs_x)) throw DomainError("evaluation range must be finite");
  const double reach = tau * max_abs_x + policy.reach();
  if (order.classical()) return classical_kernel(kind, tau, reach);

  const ZeroTable table = zero_table_upto(order, zero_kind(kind), reach);
  const auto zeros = table.zeros();
  const auto d1 = table.derivs();
  const auto d2 = table.second_derivs();
  std::vector<KernelNode> nodes;
  nodes.reserve(2 * zeros.size());
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    nodes.push_back({zeros[j], d1[j], d2[j]});
    if (kind == OperatorKind::G) {
      nodes.push_back({-zeros[j], -d1[j], d2[j]});  // A even
    } else {
      nodes.push_back({-zeros[j], d1[j], -d2[j]});  // B odd
    }
  }
  const double cover = zeros.back();
  EntireFn gen;
  if (kind == OperatorKind::G) {
    gen = [order](cplx w) { return a_nu(order, w); };
  } else {
    gen = [order](cplx w) { return b_nu(order, w); };
  }
  return GruenwaldKernel(std::move(nodes), std::move(gen), tau, 1.0, -cover, cover);
}

GruenwaldOperator::GruenwaldOperator(Order order, OperatorKind kind, double tau, double max_abs_x,
                                     TruncationPolicy policy)
    : order_(order),
      kind_(kind),
      tau_(tau),
      policy_(policy),
      kernel_(homogeneous_kernel(order, kind, tau, max_abs_x, policy)) {}

SeriesValue GruenwaldOperator::apply(const std::function<double(double)>& f, cplx z) const {
  const double tau = tau_;
  return eval_series(kernel_, [&](double t) { return f(t / tau); }, z, policy_);
}

SeriesValue GruenwaldOperator::apply_samples(const SampleFn& samples, cplx z) const {
  return eval_series(kernel_, samples, z, policy_);
}

cplx gruenwald_G(const Order& order, const TargetFunction& f, double tau, cplx z, const TruncationPolicy& policy) {
  return GruenwaldOperator(order, OperatorKind::G, tau, std::fabs(z.real()), policy).apply(f.f, z).value;
}

cplx gruenwald_H(const Order& order, const TargetFunction& f, double tau, cplx z, const TruncationPolicy& policy) {
  return GruenwaldOperator(order, OperatorKind::H, tau, std::fabs(z.real()), policy).apply(f.f, z).value;
}

MinorantSeries::MinorantSeries(Order order, double tau, double max_abs_x, TruncationPolicy policy)
    : op_((require_nonclassical(order, "the minorant series"), order), natural_kind(order), tau, max_abs_x,
          policy),
      weight_(order) {}

SeriesValue MinorantSeries::at(cplx z) const {
  const HomogeneousWeight& w = weight_;
  return op_.apply([&w](double x) { return w.reciprocal(x); }, z);
}

double minorant_L(const Order& order, double tau, double x, const TruncationPolicy& policy) {
  return MinorantSeries(order, tau, std::fabs(x), policy)(x);
}

double lemma_bound_shape(const Order& order, double tau, double x) {
  require_nonclassical(order, "the minorant bound");
  require_tau(tau);
  return shape_with_node(order, tau, x, first_node(order));
}

std::vector<LemmaErrorRow> lemma_error_shape(const Order& order, double tau, std::span<const double> xs,
                                             const TruncationPolicy& policy) {
  require_nonclassical(order, "the minorant bound");
  require_tau(tau);
  double reach = 0.0;
  for (double x : xs) reach = std::max(reach, std::fabs(x));
  const MinorantSeries L(order, tau, reach, policy);
  const HomogeneousWeight w(order);
  const double eta = first_node(order);
  std::vector<LemmaErrorRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    if (x == 0.0) continue;
    LemmaErrorRow row;
    row.x = x;
    row.deficiency = w.reciprocal(x) - L(x);
    row.bound_shape = shape_with_node(order, tau, x, eta);
    row.ratio = row.bound_shape > 0.0 ? row.deficiency / row.bound_shape : 0.0;
    rows.push_back(row);
  }
  return rows;
}

double max_conditioned_ratio(const Order& order, std::span<const LemmaErrorRow> rows, double floor) {
  const HomogeneousWeight w(order);
  double best = 0.0;
  for (const auto& row : rows) {
    if (row.bound_shape * w(row.x) >= floor) best = std::max(best, row.ratio);
  }
  return best;
}

double weighted_error(const GruenwaldOperator& op, const TargetFunction& f, double x) {
  const Order& order = op.order();
  if (x == 0.0 && !order.classical()) {
    // op f is entire, so (op f) w -> 0 at the origin when w(0) = 0. For
    // nu < -1/2 it also vanishes for H (B_nu(0) = 0 kills every term).
    double op_w = 0.0;
    if (order.regime() == Regime::H && op.kind() == OperatorKind::G) {
      const double v = op.apply(f.f, 0.0).value.real();
      if (v != 0.0) op_w = v > 0 ? kInf : -kInf;
    }
    const double fw = fw_value(order, f, 0.0);
    if (std::isinf(op_w) && std::isinf(fw) && (op_w > 0) == (fw > 0)) return kInf;
    return std::fabs(op_w - fw);
  }
  const double v = op.apply(f.f, x).value.real();
  return std::fabs(v - f(x)) * HomogeneousWeight(order)(x);
}

SupError sup_error(const Order& order, const TargetFunction& f, double tau, const GridSpec& grid,
                   OperatorKind which, const TruncationPolicy& policy) {
  const auto xs = grid.points();
  const GruenwaldOperator op(order, which, tau, max_abs(grid), policy);
  const HomogeneousWeight w(order);
  SupError out;
  bool first = true;
  for (double x : xs) {
    double err = 0.0;
    if (x == 0.0) {
      err = weighted_error(op, f, x);
    } else {
      const SeriesValue s = op.apply(f.f, x);
      const double wx = w(x);
      err = std::fabs(s.value.real() - f(x)) * wx;
      out.nodes_used = std::max(out.nodes_used, s.nodes_used);
      out.tail_estimate = std::max(out.tail_estimate, s.tail_estimate * wx);
    }
    if (std::isnan(err)) throw EvaluationError("weighted error is undefined at x = " + std::to_string(x));
    if (first || err > out.value) {
      out.value = err;
      out.argmax = x;
      first = false;
    }
  }
  return out;
}

Witness wrong_operator_probe(const Order& order, double tau, const GridSpec& grid, const TruncationPolicy& policy) {
  require_nonclassical(order, "the wrong-operator probe");
  const OperatorKind wrong = natural_kind(order) == OperatorKind::G ? OperatorKind::H : OperatorKind::G;
  const GruenwaldOperator op(order, wrong, tau, max_abs(grid), policy);
  const HomogeneousWeight w(order);
  const auto recip = [&w](double x) { return w.reciprocal(x); };
  Witness best;
  double best_rel = 0.0;
  for (double x : grid.points()) {
    if (x == 0.0) continue;
    const double v = op.apply(recip, x).value.real();
    const double r = w.reciprocal(x);
    const double rel = (v - r) / r;
    if (rel > best_rel) {
      best_rel = rel;
      best = {x, v, r};
    }
  }
  // Anything below this is indistinguishable from rounding in the series.
  if (!(best_rel > 1e-9)) {
    throw HypothesisError("no point where " + std::string(to_string(wrong)) + "(1/w) exceeds 1/w on the grid");
  }
  return best;
}

Decomposition decomposition_check(const Order& order, const TargetFunction& f, double tau, double x,
                                  const TruncationPolicy& policy) {
  require_nonclassical(order, "the decomposition");
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("decomposition needs a finite nonzero x");
  const GruenwaldOperator op(order, natural_kind(order), tau, std::fabs(x), policy);
  const HomogeneousWeight w(order);
  const double fx = f(x);
  const double wx = w(x);
  const double opf = op.apply(f.f, x).value.real();
  const double L = op.apply([&w](double u) { return w.reciprocal(u); }, x).value.real();
  const double mixed =
      op.apply([&](double u) { return f(u) - fx * wx * w.reciprocal(u); }, x).value.real();

  Decomposition d;
  d.lhs = (opf - fx) * wx;
  d.rhs_sum = mixed * wx;
  d.rhs_weight_term = fx * wx * (L * wx - 1.0);
  return d;
}

AdmissibilityReport check_admissibility(const Order& order, const TargetFunction& f, const GridSpec& grid) {
  const auto xs = grid.points();
  std::vector<double> fw(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fw[i] = fw_value(order, f, xs[i]);

  AdmissibilityReport r;
  for (double v : fw) r.sup_fw = std::max(r.sup_fw, std::fabs(v));
  auto modulus = [&](std::size_t stride) {
    double m = 0.0;
    for (std::size_t i = 0; i + stride < fw.size(); ++i) m = std::max(m, std::fabs(fw[i + stride] - fw[i]));
    return m;
  };
  r.modulus_fine = modulus(1);
  r.modulus_coarse = modulus(16);

  double nearest = kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] != 0.0 && std::fabs(xs[i]) < nearest) {
      nearest = std::fabs(xs[i]);
      r.fw_near_origin = std::fabs(fw[i]);
    }
  }

  const double scale = std::max(1.0, r.sup_fw);
  if (f.flags.fw_bounded) r.bounded_ok = std::isfinite(r.sup_fw);
  if (f.flags.fw_uniformly_continuous) {
    r.continuity_ok = std::isfinite(r.modulus_fine) && r.modulus_fine <= 0.1 * scale &&
                      r.modulus_fine <= r.modulus_coarse + 1e-15 * scale;
  }
  if (f.flags.fw_vanishes_at_origin) {
    r.origin_ok = (!f.origin_limit || *f.origin_limit == 0.0) && r.fw_near_origin <= 0.1 * scale;
  }
  return r;
}

}  // namespace gruenwald
