#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwkit/metrics.hpp"
#include "dwkit/table.hpp"

namespace dwkit {

enum class RenderFormat { Csv, Json, Markdown };

RenderFormat parse_render_format(const std::string& name);

// Percentage increase of old over new: (old - new) / new * 100.
// Undefined when the new value is not positive.
double efficiency_pct(double old_value, double new_value);

struct CapacityRow {
  std::string table;
  int64_t record_length = 0;
  int64_t record_count = 0;
  int64_t total_bytes = 0;
};

// Per-table (length, count, bytes) plus a totals row of column sums.
struct CapacityReport {
  std::string backend;
  std::vector<CapacityRow> rows;
  CapacityRow totals;
};

CapacityReport capacity_report(const Database& db);

// Totals comparison between the two backends (length/count/bytes).
struct CapacityComparison {
  CapacityRow oltp;
  CapacityRow dw;
  double pct_record_length = 0;
  double pct_record_count = 0;
  double pct_total_bytes = 0;
};

CapacityComparison compare_capacity(const CapacityReport& oltp, const CapacityReport& dw);

struct EfficiencyCell {
  double oltp = 0;
  double dw = 0;
  std::optional<double> pct;  // absent when dw == 0
};

// Six parameters per report, with the percentage-increase formula applied
// cell by cell, plus the mean over all defined cells.
struct EfficiencyReport {
  std::vector<int> report_ids;
  struct Block {
    std::string parameter;
    std::vector<EfficiencyCell> cells;  // parallel to report_ids
  };
  std::vector<Block> blocks;
  double mean_pct = 0;

  bool operator==(const EfficiencyReport&) const;
};

inline constexpr const char* kEfficiencyParameters[] = {
    "total_bytes", "records_managed", "record_length",
    "tables_used", "wall_time_s",     "rows_produced",
};

EfficiencyReport comparison_report(const std::map<int, QueryMetrics>& oltp,
                                   const std::map<int, QueryMetrics>& dw);

std::string render_capacity(const CapacityReport& report, RenderFormat format);
std::string render_capacity_comparison(const CapacityComparison& cmp, RenderFormat format);
std::string render_efficiency(const EfficiencyReport& report, RenderFormat format);

std::string efficiency_to_json(const EfficiencyReport& report);
EfficiencyReport efficiency_from_json(const std::string& text);

}  // namespace dwkit
