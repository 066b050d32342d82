#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dwkit/star.hpp"
#include "dwkit/table.hpp"

namespace dwkit {

struct LoadStats {
  int64_t inserted = 0;
  int64_t closed = 0;
  int64_t unchanged = 0;
  Date load_date;
};

// Staged rows for one warehouse table: business key -> payload, both in the
// table's field order.
using StagedRows = std::map<std::vector<Value>, std::vector<Value>, ValueVecLess>;
using KeySet = std::set<std::vector<Value>, ValueVecLess>;

struct WarehouseTableInfo {
  std::vector<int> key_idx;
  std::vector<int> payload_idx;
  int tglmula_idx = -1;
  int tglakhir_idx = -1;
};

struct Warehouse {
  WarehouseSchema schema;
  Database db;  // kind "warehouse"
  std::map<std::string, WarehouseTableInfo> info;

  static Warehouse create(WarehouseSchema schema);
};

// Stages every warehouse table from an OLTP database: the flattened program
// dimension, cohort counts, per-term activity counts, grade-index category
// counts, grade counts, and the flattened teaching schedule.
std::map<std::string, StagedRows> extract_transform(const Database& oltp,
                                                    const WarehouseSchema& wh);

// Applies one load to an effective-dated table. New keys insert an open row;
// changed payloads close the old row at load_date and insert a new open one;
// identical payloads count as unchanged. Keys that disappeared are closed,
// never deleted. When scope is given, only keys inside it are reconciled.
LoadStats constructive_merge(Table& target, const WarehouseTableInfo& info,
                             const StagedRows& staged, Date load_date,
                             const std::optional<KeySet>& scope = std::nullopt);

// Rows valid at as_of: tglmula <= as_of < tglakhir, open end = +infinity.
std::vector<Row> current_view(const Table& table, Date as_of);

// Full ETL run. With an old snapshot the load is diff-driven: only business
// keys whose contributing source rows differ between the snapshots are
// restaged, with results row-for-row identical to a full restage.
std::map<std::string, LoadStats> run_etl(const Database* old_snapshot,
                                         const Database& new_snapshot, Warehouse& wh,
                                         Date load_date);

void save_warehouse(const Warehouse& wh, const std::string& dir);
Warehouse load_warehouse(const std::string& dir);

std::string load_report_text(const std::map<std::string, LoadStats>& stats);
std::string load_report_json(const std::map<std::string, LoadStats>& stats);

}  // namespace dwkit
