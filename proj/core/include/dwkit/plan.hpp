#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dwkit/metrics.hpp"
#include "dwkit/table.hpp"

namespace dwkit {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, In };

struct Condition {
  std::string field;
  CmpOp op = CmpOp::Eq;
  Value value;
  std::vector<Value> set;  // In only
};

inline Condition cmp(std::string field, CmpOp op, Value value) {
  return {std::move(field), op, std::move(value), {}};
}
inline Condition in_set(std::string field, std::vector<Value> set) {
  return {std::move(field), CmpOp::In, Value(int64_t(0)), std::move(set)};
}

// Conjunction of conditions; empty matches everything.
struct Predicate {
  std::vector<Condition> conjuncts;
  static Predicate all() { return {}; }
};

enum class AggOp { Count, CountDistinct, Sum };

struct AggregateSpec {
  std::string output;
  AggOp op = AggOp::Count;
  std::string field;  // unused for Count
};

// Row-wise computed columns. The vocabulary is fixed to what the reports
// need: grade-to-point mapping, products and ratios for credit-weighted
// averages, and the K/C/B bucketing of a semester grade index.
enum class DeriveOp { GradePoints, Multiply, Divide, IpsCategory };

struct DerivedColumn {
  std::string output;
  DeriveOp op;
  std::string arg0;
  std::string arg1;  // Multiply/Divide only
};

struct PlanNode {
  enum class Kind { Scan, HashJoin, GroupAggregate, Derive };
  Kind kind = Kind::Scan;

  // Scan
  std::string table;
  Predicate predicate;

  // HashJoin (left/right); GroupAggregate and Derive use left as input.
  std::unique_ptr<PlanNode> left;
  std::unique_ptr<PlanNode> right;
  std::vector<std::pair<std::string, std::string>> join_keys;

  // GroupAggregate
  std::vector<std::string> group_fields;
  std::vector<AggregateSpec> aggregates;

  // Derive
  std::vector<DerivedColumn> derived;
};

using PlanPtr = std::unique_ptr<PlanNode>;

PlanPtr scan(std::string table, Predicate predicate = Predicate::all());
PlanPtr hash_join(PlanPtr left, PlanPtr right,
                  std::vector<std::pair<std::string, std::string>> keys);
PlanPtr group_aggregate(PlanPtr input, std::vector<std::string> group_fields,
                        std::vector<AggregateSpec> aggregates);
PlanPtr derive(PlanPtr input, std::vector<DerivedColumn> columns);

struct QueryResult {
  Table rows;
  QueryMetrics metrics;
};

// Executes the plan against the database and meters it: rows/bytes per base
// table scan, distinct tables used, wall time around execution only.
QueryResult run_metered(const PlanNode& plan, const Database& db);

}  // namespace dwkit
