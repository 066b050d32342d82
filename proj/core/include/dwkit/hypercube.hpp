#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwkit/campus_schema.hpp"
#include "dwkit/plan.hpp"
#include "dwkit/table.hpp"

namespace dwkit {

// Declared cardinality for year-like domains that grow without bound; such
// dimensions are only ever eliminated by the single-attribute rule.
inline constexpr int64_t kOpenCardinality = INT64_MAX;

struct DimensionSpec {
  std::string name;
  std::string key_attr;                    // attribute identifying a member
  std::vector<FieldSpec> attributes;       // resolved field specs, key first
  int64_t cardinality = 0;
  std::vector<std::string> source_tables;  // foreign-key chain, head first; empty = derived
  bool display_only = false;               // shown on the report, never grouped beyond the grain
};

struct MeasureSpec {
  std::string name;
  AggOp op = AggOp::Count;
  std::string source_field;  // empty for Count
};

// One report viewed as measures at the intersection of dimensions, plus any
// degenerate detail fields that live at the fact grain directly.
struct HypercubeSpec {
  int report_id = 0;
  std::string title;
  std::string fact_name;
  std::string source_table;
  bool detail_listing = false;
  std::vector<MeasureSpec> measures;
  std::vector<DimensionSpec> dimensions;
  std::vector<FieldSpec> detail_fields;
};

// Parses one "report ..." section of the declarative spec document.
HypercubeSpec hypercube_from_report(const std::string& section, const OltpSchema& oltp);

// Parses a whole document (sections separated by "report" lines).
std::vector<HypercubeSpec> parse_report_specs(const std::string& text, const OltpSchema& oltp);

// The five campus management reports with their dimension metadata.
const std::string& campus_report_spec_text();
std::vector<HypercubeSpec> campus_hypercubes(const OltpSchema& oltp);

}  // namespace dwkit
