#pragma once

#include <map>
#include <string>
#include <vector>

#include "dwkit/hypercube.hpp"

namespace dwkit {

enum class ElimReason { LowCardinality, SingleAttribute, DisplayOnly };

const char* elim_reason_name(ElimReason r);

struct EliminatedDim {
  std::string name;
  ElimReason reason;
  // When the dimension's source tables sit inside a retained dimension's
  // chain, its attributes already live on that merged dimension table and
  // nothing is added to the fact. Empty means the attributes were inlined
  // onto the fact.
  std::string covered_by;
};

// One report's star: a fact table at the report grain plus the dimension
// tables that survived elimination. Every table ends in tglmula/tglakhir.
struct StarSchema {
  int report_id = 0;
  std::string title;
  TableSchema fact;
  std::vector<std::string> business_key;   // fact grain fields
  std::vector<std::string> measure_fields;
  std::vector<TableSchema> dims;
  std::map<std::string, std::string> fact_dim_keys;  // fact field -> dim table
  std::vector<EliminatedDim> eliminated;
};

struct WarehouseSchema {
  std::vector<StarSchema> facts;
  std::vector<TableSchema> shared_dims;  // structurally deduplicated
  std::map<std::string, std::vector<std::string>> dim_usage;  // dim -> fact names

  std::vector<const TableSchema*> all_tables() const;
  const TableSchema& table(const std::string& name) const;
  const StarSchema& star(const std::string& fact_name) const;
};

// Flattens a foreign-key chain of dimension source tables into one table
// carrying the chain head's key plus the declared descriptive attributes,
// with the validity date pair appended.
TableSchema merge_snowflake(const DimensionSpec& dim, const OltpSchema& oltp);

// A dimension is inlined into the fact (no dimension table) when its
// cardinality is at most inline_threshold, it has a single attribute, or it
// is display-only. Retained dimensions become merged snowflake tables.
StarSchema eliminate_dimensions(const HypercubeSpec& cube, const OltpSchema& oltp,
                                int inline_threshold = 8);

// Deduplicates structurally identical dimension tables across stars.
WarehouseSchema derive_warehouse(const std::vector<StarSchema>& stars);

// Warehouse derivation for the five campus reports.
WarehouseSchema derive_campus_warehouse(const OltpSchema& oltp, int inline_threshold = 8);

// Schema-description document (for docs and golden tests).
std::string describe(const WarehouseSchema& wh);

}  // namespace dwkit
