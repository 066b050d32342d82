#pragma once

#include <string>
#include <vector>

#include "dwkit/plan.hpp"

namespace dwkit {

// The five management reports, runnable against both backends. Both plans
// produce the same grain and measure columns so results are comparable.
struct ReportDefinition {
  int id = 0;
  std::string title;
  std::vector<std::string> grain;     // group-by columns, output order
  std::vector<std::string> measures;  // measure columns (empty: detail listing)

  std::vector<std::string> columns() const;
};

const std::vector<ReportDefinition>& report_catalog();
const ReportDefinition& report_definition(int id);

PlanPtr build_oltp_plan(int id);
PlanPtr build_dw_plan(int id, Date as_of);

struct ReportResult {
  int id = 0;
  std::string backend;  // "oltp" | "dw"
  Table rows;
  QueryMetrics metrics;
};

// Runs one report. The database kind must match the backend; warehouse reads
// see the rows valid at as_of.
ReportResult run_report(int id, const std::string& backend, const Database& db, Date as_of);

struct EquivalenceVerdict {
  bool equivalent = false;
  std::vector<std::string> diffs;  // first few row-level differences
};

// Row sets must be identical after projecting both results to grain +
// measure columns (text compared trimmed).
EquivalenceVerdict assert_equivalent(const ReportResult& oltp_result,
                                     const ReportResult& dw_result);

std::string report_csv(const ReportResult& result);
std::string report_json(const ReportResult& result);

}  // namespace dwkit
