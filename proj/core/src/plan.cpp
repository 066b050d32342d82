#include "dwkit/plan.hpp"

#include <chrono>
#include <map>
#include <set>
#include <unordered_map>

#include "dwkit/ips.hpp"

namespace dwkit {

PlanPtr scan(std::string table, Predicate predicate) {
  auto n = std::make_unique<PlanNode>();
  n->kind = PlanNode::Kind::Scan;
  n->table = std::move(table);
  n->predicate = std::move(predicate);
  return n;
}

PlanPtr hash_join(PlanPtr left, PlanPtr right,
                  std::vector<std::pair<std::string, std::string>> keys) {
  auto n = std::make_unique<PlanNode>();
  n->kind = PlanNode::Kind::HashJoin;
  n->left = std::move(left);
  n->right = std::move(right);
  n->join_keys = std::move(keys);
  return n;
}

PlanPtr group_aggregate(PlanPtr input, std::vector<std::string> group_fields,
                        std::vector<AggregateSpec> aggregates) {
  auto n = std::make_unique<PlanNode>();
  n->kind = PlanNode::Kind::GroupAggregate;
  n->left = std::move(input);
  n->group_fields = std::move(group_fields);
  n->aggregates = std::move(aggregates);
  return n;
}

PlanPtr derive(PlanPtr input, std::vector<DerivedColumn> columns) {
  auto n = std::make_unique<PlanNode>();
  n->kind = PlanNode::Kind::Derive;
  n->left = std::move(input);
  n->derived = std::move(columns);
  return n;
}

namespace {

struct Batch {
  std::string label;
  std::vector<FieldSpec> fields;
  std::vector<Row> rows;

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }
  int require(const std::string& name) const {
    int idx = index_of(name);
    if (idx < 0) throw ValidationError(label + ": unknown field '" + name + "'");
    return idx;
  }
};

struct Meter {
  std::map<std::string, TableStats> tables;  // distinct base tables
  int64_t records = 0;
  int64_t bytes = 0;
};

bool kinds_joinable(FieldKind a, FieldKind b) {
  auto cls = [](FieldKind k) {
    switch (k) {
      case FieldKind::Text:
      case FieldKind::Enum: return 0;
      case FieldKind::Integer:
      case FieldKind::Decimal: return 1;
      case FieldKind::Date: return 2;
    }
    return -1;
  };
  return cls(a) == cls(b);
}

bool eval_condition(const Condition& c, const Value& v) {
  if (c.op == CmpOp::In) {
    for (const auto& candidate : c.set) {
      if (values_equal(v, candidate)) return true;
    }
    return false;
  }
  int cmp = compare_values(v, c.value);
  switch (c.op) {
    case CmpOp::Eq: return cmp == 0;
    case CmpOp::Ne: return cmp != 0;
    case CmpOp::Lt: return cmp < 0;
    case CmpOp::Le: return cmp <= 0;
    case CmpOp::Gt: return cmp > 0;
    case CmpOp::Ge: return cmp >= 0;
    case CmpOp::In: return false;
  }
  return false;
}

Batch exec(const PlanNode& node, const Database& db, Meter& meter);

Batch exec_scan(const PlanNode& node, const Database& db, Meter& meter) {
  const Table& t = db.table(node.table);
  Batch out;
  out.label = node.table;
  out.fields = t.schema().fields;

  std::vector<int> cond_idx;
  cond_idx.reserve(node.predicate.conjuncts.size());
  for (const auto& c : node.predicate.conjuncts) out.require(c.field), cond_idx.push_back(out.index_of(c.field));

  // Full scan: the whole table is read and metered no matter how selective
  // the predicate is.
  TableStats st = t.stats();
  meter.tables.emplace(node.table, st);
  meter.records += st.record_count;
  meter.bytes += st.total_bytes;

  for (const auto& row : t.rows()) {
    bool keep = true;
    for (size_t i = 0; i < cond_idx.size() && keep; ++i)
      keep = eval_condition(node.predicate.conjuncts[i], row[cond_idx[i]]);
    if (keep) out.rows.push_back(row);
  }
  return out;
}

Batch exec_join(const PlanNode& node, const Database& db, Meter& meter) {
  Batch left = exec(*node.left, db, meter);
  Batch right = exec(*node.right, db, meter);

  std::vector<int> lk, rk;
  for (const auto& [lf, rf] : node.join_keys) {
    int li = left.require(lf);
    int ri = right.require(rf);
    if (!kinds_joinable(left.fields[li].kind, right.fields[ri].kind))
      throw ValidationError("join key kinds incompatible: " + lf + " vs " + rf);
    lk.push_back(li);
    rk.push_back(ri);
  }

  Batch out;
  out.label = left.label;
  out.fields = left.fields;
  for (const auto& f : right.fields) {
    FieldSpec spec = f;
    if (out.index_of(f.name) >= 0) spec.name = right.label + "." + f.name;
    out.fields.push_back(std::move(spec));
  }

  auto key_of = [](const Row& row, const std::vector<int>& idx) {
    std::string key;
    for (int i : idx) {
      key += value_key(row[i]);
      key.push_back('\x1f');
    }
    return key;
  };

  // Build on the smaller input, probe the other side in its row order, and
  // always emit left fields first so the output schema does not depend on
  // which side built the hash.
  bool build_right = right.rows.size() <= left.rows.size();
  const Batch& build = build_right ? right : left;
  const Batch& probe = build_right ? left : right;
  const auto& build_idx = build_right ? rk : lk;
  const auto& probe_idx = build_right ? lk : rk;

  std::unordered_map<std::string, std::vector<size_t>> ht;
  ht.reserve(build.rows.size());
  for (size_t i = 0; i < build.rows.size(); ++i) ht[key_of(build.rows[i], build_idx)].push_back(i);

  for (const auto& probe_row : probe.rows) {
    auto it = ht.find(key_of(probe_row, probe_idx));
    if (it == ht.end()) continue;
    for (size_t bi : it->second) {
      const Row& lrow = build_right ? probe_row : build.rows[bi];
      const Row& rrow = build_right ? build.rows[bi] : probe_row;
      Row joined;
      joined.reserve(lrow.size() + rrow.size());
      joined.insert(joined.end(), lrow.begin(), lrow.end());
      joined.insert(joined.end(), rrow.begin(), rrow.end());
      out.rows.push_back(std::move(joined));
    }
  }
  return out;
}

Batch exec_aggregate(const PlanNode& node, const Database& db, Meter& meter) {
  Batch in = exec(*node.left, db, meter);

  std::vector<int> group_idx;
  for (const auto& g : node.group_fields) group_idx.push_back(in.require(g));

  struct AggPlan {
    AggOp op;
    int field_idx = -1;
    bool sum_is_integer = false;
  };
  std::vector<AggPlan> aggs;
  for (const auto& a : node.aggregates) {
    AggPlan p;
    p.op = a.op;
    if (a.op != AggOp::Count) {
      p.field_idx = in.require(a.field);
      if (a.op == AggOp::Sum) {
        FieldKind k = in.fields[p.field_idx].kind;
        if (k != FieldKind::Integer && k != FieldKind::Decimal)
          throw ValidationError("sum over non-numeric field '" + a.field + "'");
        p.sum_is_integer = k == FieldKind::Integer;
      }
    }
    aggs.push_back(p);
  }

  struct GroupState {
    std::vector<int64_t> counts;
    std::vector<double> sums;
    std::vector<int64_t> isums;
    std::vector<std::set<std::string>> distinct;
  };

  std::map<std::vector<Value>, GroupState, ValueVecLess> groups;
  for (const auto& row : in.rows) {
    std::vector<Value> key;
    key.reserve(group_idx.size());
    for (int gi : group_idx) key.push_back(row[gi]);
    auto [it, fresh] = groups.try_emplace(std::move(key));
    GroupState& st = it->second;
    if (fresh) {
      st.counts.assign(aggs.size(), 0);
      st.sums.assign(aggs.size(), 0.0);
      st.isums.assign(aggs.size(), 0);
      st.distinct.resize(aggs.size());
    }
    for (size_t i = 0; i < aggs.size(); ++i) {
      switch (aggs[i].op) {
        case AggOp::Count: st.counts[i]++; break;
        case AggOp::CountDistinct: st.distinct[i].insert(value_key(row[aggs[i].field_idx])); break;
        case AggOp::Sum:
          if (aggs[i].sum_is_integer)
            st.isums[i] += int_of(row[aggs[i].field_idx]);
          else
            st.sums[i] += numeric_of(row[aggs[i].field_idx]);
          break;
      }
    }
  }

  Batch out;
  out.label = in.label;
  for (int gi : group_idx) out.fields.push_back(in.fields[gi]);
  for (size_t i = 0; i < aggs.size(); ++i) {
    const auto& a = node.aggregates[i];
    if (a.op == AggOp::Sum && !aggs[i].sum_is_integer)
      out.fields.push_back({a.output, FieldKind::Decimal, 12, {}});
    else
      out.fields.push_back({a.output, FieldKind::Integer, 8, {}});
  }

  // std::map iteration gives the lexicographic group order the output
  // contract requires.
  for (const auto& [key, st] : groups) {
    Row row = key;
    for (size_t i = 0; i < aggs.size(); ++i) {
      switch (aggs[i].op) {
        case AggOp::Count: row.push_back(st.counts[i]); break;
        case AggOp::CountDistinct: row.push_back(static_cast<int64_t>(st.distinct[i].size())); break;
        case AggOp::Sum:
          if (aggs[i].sum_is_integer)
            row.push_back(st.isums[i]);
          else
            row.push_back(st.sums[i]);
          break;
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

Batch exec_derive(const PlanNode& node, const Database& db, Meter& meter) {
  Batch in = exec(*node.left, db, meter);

  struct ColPlan {
    DeriveOp op;
    int a0 = -1;
    int a1 = -1;
    bool int_result = false;
  };
  std::vector<ColPlan> cols;
  Batch out;
  out.label = in.label;
  out.fields = in.fields;
  for (const auto& d : node.derived) {
    ColPlan p;
    p.op = d.op;
    p.a0 = out.index_of(d.arg0) >= 0 ? out.require(d.arg0) : in.require(d.arg0);
    switch (d.op) {
      case DeriveOp::GradePoints:
        out.fields.push_back({d.output, FieldKind::Integer, 1, {}});
        break;
      case DeriveOp::Multiply: {
        p.a1 = out.require(d.arg1);
        p.int_result = out.fields[p.a0].kind == FieldKind::Integer &&
                       out.fields[p.a1].kind == FieldKind::Integer;
        out.fields.push_back(
            {d.output, p.int_result ? FieldKind::Integer : FieldKind::Decimal, 12, {}});
        break;
      }
      case DeriveOp::Divide:
        p.a1 = out.require(d.arg1);
        out.fields.push_back({d.output, FieldKind::Decimal, 12, {}});
        break;
      case DeriveOp::IpsCategory:
        out.fields.push_back({d.output, FieldKind::Enum, 1, {"K", "C", "B"}});
        break;
    }
    cols.push_back(p);
  }

  out.rows.reserve(in.rows.size());
  for (auto& row : in.rows) {
    Row r = std::move(row);
    for (const auto& p : cols) {
      switch (p.op) {
        case DeriveOp::GradePoints:
          r.push_back(static_cast<int64_t>(grade_points(text_of(r[p.a0]))));
          break;
        case DeriveOp::Multiply:
          if (p.int_result)
            r.push_back(int_of(r[p.a0]) * int_of(r[p.a1]));
          else
            r.push_back(numeric_of(r[p.a0]) * numeric_of(r[p.a1]));
          break;
        case DeriveOp::Divide: {
          double denom = numeric_of(r[p.a1]);
          if (denom == 0.0) throw ValidationError("derive: division by zero");
          r.push_back(numeric_of(r[p.a0]) / denom);
          break;
        }
        case DeriveOp::IpsCategory:
          r.push_back(std::string(ips_category_name(classify_ips(numeric_of(r[p.a0])))));
          break;
      }
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

Batch exec(const PlanNode& node, const Database& db, Meter& meter) {
  switch (node.kind) {
    case PlanNode::Kind::Scan: return exec_scan(node, db, meter);
    case PlanNode::Kind::HashJoin: return exec_join(node, db, meter);
    case PlanNode::Kind::GroupAggregate: return exec_aggregate(node, db, meter);
    case PlanNode::Kind::Derive: return exec_derive(node, db, meter);
  }
  throw ValidationError("unknown plan node kind");
}

}  // namespace

QueryResult run_metered(const PlanNode& plan, const Database& db) {
  Meter meter;
  auto t0 = std::chrono::steady_clock::now();
  Batch result = exec(plan, db, meter);
  auto t1 = std::chrono::steady_clock::now();

  QueryMetrics m;
  m.tables_used = static_cast<int64_t>(meter.tables.size());
  for (const auto& [name, st] : meter.tables) m.record_length_sum += st.record_length;
  m.records_scanned = meter.records;
  m.bytes_scanned = meter.bytes;
  m.rows_produced = static_cast<int64_t>(result.rows.size());
  m.wall_time =
      std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1'000'000.0;

  TableSchema schema;
  schema.name = "result";
  schema.fields = std::move(result.fields);
  for (const auto& f : schema.fields) schema.record_length += f.width;
  return {Table::materialize(std::move(schema), std::move(result.rows)), m};
}

}  // namespace dwkit
