#include "gruenwald/report.hpp"

#include <cmath>
#include <json.hpp>
#include <ostream>

#include "gruenwald/format.hpp"

namespace gruenwald {

namespace {

using json = nlohmann::ordered_json;

// JSON has no inf/nan; store those as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Verdict apply_rule(const VerdictRule& rule, const std::vector<ConvergenceRow>& rows) {
  Verdict v;
  switch (rule.kind) {
    case VerdictRule::Kind::StrictlyDecreasing: {
      v.rule = "strictly-decreasing";
      v.pass = rows.size() >= 2;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].sup_error < rows[i - 1].sup_error)) {
          v.pass = false;
          v.detail = "tau=" + format_double(rows[i].tau) + " does not improve on tau=" + format_double(rows[i - 1].tau);
          break;
        }
      }
      if (rows.size() < 2) v.detail = "fewer than two rows";
      break;
    }
    case VerdictRule::Kind::FinalBelow: {
      v.rule = "final-below " + format_double(rule.threshold);
      v.pass = !rows.empty() && rows.back().sup_error < rule.threshold;
      v.detail = rows.empty() ? "no rows" : "final=" + format_double(rows.back().sup_error);
      break;
    }
    case VerdictRule::Kind::Persists: {
      v.rule = "expected-failure persists " + format_double(rule.threshold);
      v.pass = rows.size() >= 2 && rows.back().sup_error >= rule.threshold * rows.front().sup_error;
      v.detail = rows.size() < 2 ? "fewer than two rows"
                                 : "first=" + format_double(rows.front().sup_error) +
                                       " last=" + format_double(rows.back().sup_error);
      break;
    }
  }
  return v;
}

json verdicts_json(const std::vector<Verdict>& verdicts) {
  json arr = json::array();
  for (const auto& v : verdicts) arr.push_back({{"rule", v.rule}, {"pass", v.pass}, {"detail", v.detail}});
  return arr;
}

}  // namespace

std::vector<Verdict> evaluate_verdicts(const ConvergenceReport& report) {
  std::vector<Verdict> out;
  if (!report.failures.empty()) {
    out.push_back({"hypotheses", false, report.failures.front()});
  }
  for (const auto& rule : report.rules) out.push_back(apply_rule(rule, report.rows));
  return out;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

void write_csv(std::ostream& out, const ConvergenceReport& report) {
  const bool family = !report.family_id.empty();
  out << "nu,tau,grid_min,grid_max,grid_step,sup_error,argmax,tail_tolerance,nodes_used";
  if (family) out << ",family_id";
  out << '\n';
  const std::string nu = report.nu ? format_double(*report.nu) : "";
  for (const auto& r : report.rows) {
    out << nu << ',' << format_double(r.tau) << ',' << format_double(report.grid.min) << ','
        << format_double(report.grid.max) << ',' << format_double(report.grid.step) << ','
        << format_double(r.sup_error) << ',' << format_double(r.argmax) << ','
        << format_double(report.tail_tolerance) << ',' << r.nodes_used;
    if (family) out << ',' << report.family_id;
    out << '\n';
  }
}

void write_json(std::ostream& out, const ConvergenceReport& report) {
  json doc;
  doc["schema"] = 1;
  doc["experiment"] = report.experiment;
  json config;
  config["target"] = report.target;
  config["operator"] = report.operator_name;
  config["nu"] = report.nu ? json(*report.nu) : json(nullptr);
  if (!report.family_id.empty()) config["family_id"] = report.family_id;
  config["grid"] = {{"min", report.grid.min}, {"max", report.grid.max}, {"step", report.grid.step}};
  config["radius"] = report.radius;
  config["tail_tolerance"] = report.tail_tolerance;
  doc["config"] = config;
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"tau", r.tau},
                    {"sup_error", number(r.sup_error)},
                    {"argmax", r.argmax},
                    {"nodes_used", r.nodes_used},
                    {"tail_estimate", number(r.tail_estimate)}});
  }
  doc["rows"] = rows;
  doc["failures"] = report.failures;
  doc["verdicts"] = verdicts_json(evaluate_verdicts(report));
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const DataTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const DataTable& table) {
  json doc;
  doc["schema"] = 1;
  doc["experiment"] = table.experiment;
  doc["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) r.push_back(number(v));
    rows.push_back(r);
  }
  doc["rows"] = rows;
  doc["verdicts"] = verdicts_json(table.verdicts);
  out << doc.dump(2) << '\n';
}

}  // namespace gruenwald
