#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gruenwald/grid.hpp"

namespace gruenwald {

struct ConvergenceRow {
  double tau = 0.0;
  double sup_error = 0.0;
  double argmax = 0.0;
  std::size_t nodes_used = 0;
  double tail_estimate = 0.0;
};

/// Acceptance rule applied to the sup_error column.
struct VerdictRule {
  enum class Kind {
    StrictlyDecreasing,
    FinalBelow,     // last sup_error < threshold
    Persists,       // last sup_error >= threshold * first (expected failure)
  };
  Kind kind = Kind::StrictlyDecreasing;
  double threshold = 0.0;
};

struct Verdict {
  std::string rule;
  bool pass = false;
  std::string detail;
};

struct ConvergenceReport {
  std::string experiment;
  std::string target;
  std::string operator_name;
  std::optional<double> nu;
  /// Non-empty for Hermite-Biehler families; adds a CSV column.
  std::string family_id;
  GridSpec grid;
  double radius = 0.0;
  double tail_tolerance = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<VerdictRule> rules;
  /// Hypothesis failures found before or during the run.
  std::vector<std::string> failures;
};

/// Numeric table for probe and identity-check outputs.
struct DataTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Verdict> verdicts;
};

void write_csv(std::ostream& out, const DataTable& table);
void write_json(std::ostream& out, const DataTable& table);

/// Recomputes every verdict from the rows; a recorded failure adds a
/// failing "hypotheses" verdict.
std::vector<Verdict> evaluate_verdicts(const ConvergenceReport& report);
bool all_pass(const std::vector<Verdict>& verdicts);

/// Columns nu, tau, grid_min, grid_max, grid_step, sup_error, argmax,
/// tail_tolerance, nodes_used (+ family_id), one row per tau.
void write_csv(std::ostream& out, const ConvergenceReport& report);
/// Versioned JSON document ("schema": 1) with config echo, rows and verdicts.
void write_json(std::ostream& out, const ConvergenceReport& report);

}  // namespace gruenwald
