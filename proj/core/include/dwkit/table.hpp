#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "dwkit/value.hpp"

namespace dwkit {

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::Text;
  int width = 0;  // fixed width in bytes
  std::vector<std::string> enum_values;
};

inline FieldSpec text_field(std::string name, int width) {
  return {std::move(name), FieldKind::Text, width, {}};
}
inline FieldSpec int_field(std::string name, int width) {
  return {std::move(name), FieldKind::Integer, width, {}};
}
inline FieldSpec date_field(std::string name) {
  return {std::move(name), FieldKind::Date, 8, {}};
}
inline FieldSpec enum_field(std::string name, int width, std::vector<std::string> values) {
  return {std::move(name), FieldKind::Enum, width, std::move(values)};
}

struct TableSchema {
  std::string name;
  std::vector<FieldSpec> fields;
  std::vector<std::string> primary_key;
  int record_length = 0;  // sum of field widths

  int field_index(const std::string& field) const;
  const FieldSpec& field(const std::string& field) const;
  bool has_field(const std::string& field) const { return field_index(field) >= 0; }
};

// Validates the field specs and computes the record length.
TableSchema define_table(const std::string& name, std::vector<FieldSpec> fields,
                         std::vector<std::string> primary_key);

using Row = std::vector<Value>;

struct TableStats {
  int record_length = 0;
  int64_t record_count = 0;
  int64_t total_bytes = 0;
};

// Fixed-width row store. Text values are space-padded to the declared width
// on insert, and capacity is always record_length * record_count.
class Table {
 public:
  explicit Table(TableSchema schema, bool enforce_unique_pk = true);

  const TableSchema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  int64_t row_count() const { return static_cast<int64_t>(rows_.size()); }

  // Returns the position of the inserted row.
  int64_t insert(Row row);

  TableStats stats() const;

  // In-place rewrite of a single field, used by the ETL to close
  // effective-dated rows. Requires exclusive access.
  void update_field(size_t row_pos, int field_idx, const Value& v);

  // Trusted construction for query results; skips row validation.
  static Table materialize(TableSchema schema, std::vector<Row> rows);

 private:
  Value conform(const FieldSpec& f, Value v) const;
  std::string pk_key(const Row& row) const;

  TableSchema schema_;
  std::vector<Row> rows_;
  std::vector<int> pk_idx_;
  bool enforce_unique_pk_ = true;
  std::unordered_set<std::string> pk_seen_;
};

inline TableStats table_stats(const Table& t) { return t.stats(); }

// A named collection of tables; kind is "oltp" or "warehouse".
struct Database {
  std::string kind;
  uint64_t config_hash = 0;
  std::map<std::string, Table> tables;

  bool has_table(const std::string& name) const { return tables.count(name) > 0; }
  Table& table(const std::string& name);
  const Table& table(const std::string& name) const;
};

}  // namespace dwkit
