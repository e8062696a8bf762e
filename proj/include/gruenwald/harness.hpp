#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gruenwald/debranges.hpp"
#include "gruenwald/grid.hpp"
#include "gruenwald/homogeneous.hpp"
#include "gruenwald/report.hpp"
#include "gruenwald/series.hpp"

namespace gruenwald {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& text);

/// One convergence experiment.
///   theorem1  weighted sup error of G/H along the ladder, must decrease
///   remark1   same, but the error is expected to persist
///   theorem2  G_E for a Hermite-Biehler family (only "sinh"), weight x^2+1
struct ExperimentConfig {
  std::string experiment = "theorem1";
  double nu = 0.0;
  std::vector<double> tau_ladder{4.0, 8.0, 16.0, 32.0, 64.0};
  GridSpec grid;
  TruncationPolicy policy;
  std::string target = "gaussian";
  /// Defaults to the natural operator of the order.
  std::optional<OperatorKind> op;
  std::string family = "sinh";
  /// CSV of x,value pairs for the custom-samples target.
  std::string samples_path;
  /// Threshold of the final-error rule.
  double final_threshold = 1e-2;
  /// Factor of the persistence rule (remark1).
  double persist_factor = 0.5;

  void validate() const;
};

/// Names accepted by make_target.
std::vector<std::string> target_catalog();

/// gaussian, gaussian-times-x2, recip-weight (1/w_nu), poisson-recip
/// (1/(x^2+1)), constant-one, custom-samples. Admissibility flags are set for
/// the given order. custom-samples interpolates linearly between the listed
/// points and raises MissingSampleError outside them.
TargetFunction make_target(const std::string& id, const Order& order, const std::string& samples_path = "");

ConvergenceReport run_convergence(const ExperimentConfig& config);

/// De Branges identity suite for the sinh example at one tau: per grid point
/// the weighted Fejer residual, pi K - phi'|E|^2 and the tanh/coth sandwich.
DataTable run_kernel_check(double tau, const GridSpec& grid, const TruncationPolicy& policy = {});

/// Columns nu, tau, x, op_value, reciprocal, excess; one row per tau.
DataTable run_wrong_operator(double nu, const std::vector<double>& taus, const GridSpec& grid,
                             const TruncationPolicy& policy = {});
/// Columns tau, max_abs_p, argmax.
DataTable run_cos_case(const std::vector<double>& taus, const GridSpec& grid, const TruncationPolicy& policy = {});
/// Columns tau, value, exact, control.
DataTable run_dilation_failure(const std::vector<double>& taus, const TruncationPolicy& policy = {});

}  // namespace gruenwald
