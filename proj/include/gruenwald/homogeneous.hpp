#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gruenwald/grid.hpp"
#include "gruenwald/series.hpp"
#include "gruenwald/special.hpp"

namespace gruenwald {

enum class OperatorKind {
  G,  // generator A_nu, nodes: zeros of J_nu
  H,  // generator B_nu, nodes: zeros of J_{nu+1}
};

const char* to_string(OperatorKind kind) noexcept;

/// w_nu(x) = |x|^{2nu+1}.
class HomogeneousWeight {
 public:
  explicit HomogeneousWeight(Order order) : order_(order) {}
  const Order& order() const noexcept { return order_; }
  /// +infinity at x = 0 when nu < -1/2.
  double operator()(double x) const;
  /// 1/w_nu(x); +infinity at x = 0 when nu > -1/2.
  double reciprocal(double x) const;

 private:
  Order order_;
};

/// Caller-declared hypotheses on f w_nu. Spot-checked by check_admissibility,
/// never assumed to have been proven.
struct AdmissibilityFlags {
  bool fw_bounded = false;
  bool fw_uniformly_continuous = false;
  bool fw_vanishes_at_origin = false;
};

struct TargetFunction {
  std::string name;
  std::function<double(double)> f;
  /// Limit of f(x) w_nu(x) as x -> 0, if declared. Absent means f is finite
  /// at 0 and the limit follows from the weight.
  std::optional<double> origin_limit;
  AdmissibilityFlags flags;

  double operator()(double x) const { return f(x); }
};

/// Quadratic-node operator G_{nu,tau} or H_{nu,tau} with its node table
/// built once. `max_abs_x` bounds |Re z| of every later evaluation.
class GruenwaldOperator {
 public:
  GruenwaldOperator(Order order, OperatorKind kind, double tau, double max_abs_x,
                    TruncationPolicy policy = {});

  const Order& order() const noexcept { return order_; }
  OperatorKind kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  const GruenwaldKernel& kernel() const noexcept { return kernel_; }

  /// Series with samples f(t/tau).
  SeriesValue apply(const std::function<double(double)>& f, cplx z) const;
  /// Series with samples given directly per node (kernel coordinates).
  SeriesValue apply_samples(const SampleFn& samples, cplx z) const;

 private:
  Order order_;
  OperatorKind kind_;
  double tau_;
  TruncationPolicy policy_;
  GruenwaldKernel kernel_;
};

/// Kernel of G_{nu,tau} (kind G) or H_{nu,tau} (kind H). For nu = -1/2 the H
/// node set is every k pi, the origin included.
GruenwaldKernel homogeneous_kernel(const Order& order, OperatorKind kind, double tau, double max_abs_x,
                                   const TruncationPolicy& policy = {});

cplx gruenwald_G(const Order& order, const TargetFunction& f, double tau, cplx z,
                 const TruncationPolicy& policy = {});
cplx gruenwald_H(const Order& order, const TargetFunction& f, double tau, cplx z,
                 const TruncationPolicy& policy = {});

/// The operator whose node set makes L_{nu,tau} = op(1/w_nu) a minorant:
/// G for nu > -1/2, H for nu < -1/2.
OperatorKind natural_kind(const Order& order);

/// L_{nu,tau}: the natural operator applied to 1/w_nu.
class MinorantSeries {
 public:
  MinorantSeries(Order order, double tau, double max_abs_x, TruncationPolicy policy = {});

  const GruenwaldOperator& op() const noexcept { return op_; }
  SeriesValue at(cplx z) const;
  double operator()(double x) const { return at(x).value.real(); }

 private:
  GruenwaldOperator op_;
  HomogeneousWeight weight_;
};

double minorant_L(const Order& order, double tau, double x, const TruncationPolicy& policy = {});

struct LemmaErrorRow {
  double x = 0.0;
  double deficiency = 0.0;   // 1/w_nu(x) - L_{nu,tau}(x)
  double bound_shape = 0.0;  // pointwise error bound without its constant
  double ratio = 0.0;        // deficiency / bound_shape, 0 where the shape vanishes
};

/// Right-hand side of the pointwise minorant error bound, without the
/// unknown constant. Uses A_nu for nu > -1/2 and B_nu for nu < -1/2; the
/// removable singularity at tau|x| = eta_1/2 is evaluated by its limit.
double lemma_bound_shape(const Order& order, double tau, double x);

/// One row per nonzero x (x = 0 is skipped: 1/w_nu is singular there or the
/// bound is degenerate).
std::vector<LemmaErrorRow> lemma_error_shape(const Order& order, double tau, std::span<const double> xs,
                                             const TruncationPolicy& policy = {});

/// Largest ratio over rows whose bound, measured against 1/w_nu, is at least
/// `floor`. Near the nodes both sides vanish and the ratio is rounding noise.
double max_conditioned_ratio(const Order& order, std::span<const LemmaErrorRow> rows, double floor = 1e-7);

struct SupError {
  double value = 0.0;
  double argmax = 0.0;
  std::size_t nodes_used = 0;
  double tail_estimate = 0.0;  // largest over the grid
};

/// Weighted error at one point: |op f(x) - f(x)| w_nu(x), with the value at
/// x = 0 taken from the declared origin limit.
double weighted_error(const GruenwaldOperator& op, const TargetFunction& f, double x);

/// max over the grid of the weighted error, first maximizer on ties.
SupError sup_error(const Order& order, const TargetFunction& f, double tau, const GridSpec& grid,
                   OperatorKind which, const TruncationPolicy& policy = {});

struct Witness {
  double x = 0.0;
  double op_value = 0.0;   // mismatched operator applied to 1/w_nu at x
  double reciprocal = 0.0;  // 1/w_nu(x)
  double excess() const { return op_value - reciprocal; }
};

/// Scans the grid for a point where the mismatched operator (H for
/// nu > -1/2, G for nu < -1/2) applied to 1/w_nu exceeds 1/w_nu. Returns the
/// point of largest relative excess; throws HypothesisError if none is found.
Witness wrong_operator_probe(const Order& order, double tau, const GridSpec& grid = {-10.0, 10.0, 1.0 / 97.0},
                             const TruncationPolicy& policy = {});

struct Decomposition {
  double lhs = 0.0;              // (op f - f) w
  double rhs_sum = 0.0;          // (op f - f L w) w, summed as one series
  double rhs_weight_term = 0.0;  // f w (L w - 1)
  double residual() const { return lhs - rhs_sum - rhs_weight_term; }
};

/// Splits the weighted error at x into the series part and the minorant
/// deficiency part using the natural operator. Requires x != 0.
Decomposition decomposition_check(const Order& order, const TargetFunction& f, double tau, double x,
                                  const TruncationPolicy& policy = {});

struct AdmissibilityReport {
  double sup_fw = 0.0;
  /// Largest |fw(x) - fw(y)| over grid neighbours at the finest step.
  double modulus_fine = 0.0;
  /// Same at 16 times the step.
  double modulus_coarse = 0.0;
  double fw_near_origin = 0.0;
  bool bounded_ok = true;
  bool continuity_ok = true;
  bool origin_ok = true;
  bool ok() const { return bounded_ok && continuity_ok && origin_ok; }
};

/// Spot-checks the declared flags of f on the grid.
AdmissibilityReport check_admissibility(const Order& order, const TargetFunction& f, const GridSpec& grid);

}  // namespace gruenwald
