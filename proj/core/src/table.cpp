#include "dwkit/table.hpp"

#include <algorithm>

namespace dwkit {

int TableSchema::field_index(const std::string& field) const {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == field) return static_cast<int>(i);
  }
  return -1;
}

const FieldSpec& TableSchema::field(const std::string& field) const {
  int idx = field_index(field);
  if (idx < 0) throw ValidationError(name + ": unknown field '" + field + "'");
  return fields[idx];
}

TableSchema define_table(const std::string& name, std::vector<FieldSpec> fields,
                         std::vector<std::string> primary_key) {
  if (fields.empty()) throw ValidationError(name + ": table needs at least one field");
  TableSchema schema;
  schema.name = name;
  schema.fields = std::move(fields);
  schema.primary_key = std::move(primary_key);
  for (const auto& f : schema.fields) {
    if (f.name.empty()) throw ValidationError(name + ": empty field name");
    if (f.width < 1) throw ValidationError(name + ": field '" + f.name + "' has zero width");
    if (f.kind == FieldKind::Enum && f.enum_values.empty())
      throw ValidationError(name + ": enum field '" + f.name + "' has no value set");
    if (f.kind == FieldKind::Enum) {
      for (const auto& v : f.enum_values) {
        if (static_cast<int>(v.size()) > f.width)
          throw ValidationError(name + ": enum value '" + v + "' wider than field '" + f.name + "'");
      }
    }
    schema.record_length += f.width;
  }
  for (size_t i = 0; i < schema.fields.size(); ++i) {
    for (size_t j = i + 1; j < schema.fields.size(); ++j) {
      if (schema.fields[i].name == schema.fields[j].name)
        throw ValidationError(name + ": duplicate field '" + schema.fields[i].name + "'");
    }
  }
  for (const auto& k : schema.primary_key) {
    if (schema.field_index(k) < 0)
      throw ValidationError(name + ": primary key field '" + k + "' does not exist");
  }
  return schema;
}

Table::Table(TableSchema schema, bool enforce_unique_pk)
    : schema_(std::move(schema)), enforce_unique_pk_(enforce_unique_pk) {
  for (const auto& k : schema_.primary_key) pk_idx_.push_back(schema_.field_index(k));
}

Value Table::conform(const FieldSpec& f, Value v) const {
  switch (f.kind) {
    case FieldKind::Text:
    case FieldKind::Enum: {
      if (!holds_text(v))
        throw ValidationError(schema_.name + "." + f.name + ": expected text value");
      std::string s(trimmed(std::get<std::string>(v)));
      if (static_cast<int>(s.size()) > f.width)
        throw ValidationError(schema_.name + "." + f.name + ": value '" + s +
                              "' exceeds width " + std::to_string(f.width));
      if (f.kind == FieldKind::Enum &&
          std::find(f.enum_values.begin(), f.enum_values.end(), s) == f.enum_values.end())
        throw ValidationError(schema_.name + "." + f.name + ": value '" + s +
                              "' outside enum domain");
      s.resize(f.width, ' ');
      return Value(std::move(s));
    }
    case FieldKind::Integer: {
      int64_t i = int_of(v);
      if (static_cast<int>(std::to_string(i).size()) > f.width)
        throw ValidationError(schema_.name + "." + f.name + ": integer " + std::to_string(i) +
                              " does not fit width " + std::to_string(f.width));
      return v;
    }
    case FieldKind::Decimal:
      numeric_of(v);
      return v;
    case FieldKind::Date:
      date_of(v);
      if (f.width < 8)
        throw ValidationError(schema_.name + "." + f.name + ": date fields need width >= 8");
      return v;
  }
  return v;
}

std::string Table::pk_key(const Row& row) const {
  std::string key;
  for (int idx : pk_idx_) {
    key += value_key(row[idx]);
    key.push_back('\x1f');
  }
  return key;
}

int64_t Table::insert(Row row) {
  if (row.size() != schema_.fields.size())
    throw ValidationError(schema_.name + ": row has " + std::to_string(row.size()) +
                          " values, schema has " + std::to_string(schema_.fields.size()));
  for (size_t i = 0; i < row.size(); ++i) row[i] = conform(schema_.fields[i], std::move(row[i]));
  if (!pk_idx_.empty()) {
    for (int idx : pk_idx_) {
      if (holds_text(row[idx]) && trimmed(std::get<std::string>(row[idx])).empty())
        throw ValidationError(schema_.name + ": empty primary key value");
    }
    if (enforce_unique_pk_ && !pk_seen_.insert(pk_key(row)).second)
      throw ValidationError(schema_.name + ": duplicate primary key");
  }
  rows_.push_back(std::move(row));
  return static_cast<int64_t>(rows_.size()) - 1;
}

TableStats Table::stats() const {
  TableStats s;
  s.record_length = schema_.record_length;
  s.record_count = row_count();
  s.total_bytes = static_cast<int64_t>(s.record_length) * s.record_count;
  return s;
}

void Table::update_field(size_t row_pos, int field_idx, const Value& v) {
  if (row_pos >= rows_.size()) throw ValidationError(schema_.name + ": row position out of range");
  if (field_idx < 0 || field_idx >= static_cast<int>(schema_.fields.size()))
    throw ValidationError(schema_.name + ": field index out of range");
  rows_[row_pos][field_idx] = conform(schema_.fields[field_idx], v);
}

Table Table::materialize(TableSchema schema, std::vector<Row> rows) {
  Table t(std::move(schema), /*enforce_unique_pk=*/false);
  t.rows_ = std::move(rows);
  return t;
}

Table& Database::table(const std::string& name) {
  auto it = tables.find(name);
  if (it == tables.end()) throw ValidationError("no such table: " + name);
  return it->second;
}

const Table& Database::table(const std::string& name) const {
  auto it = tables.find(name);
  if (it == tables.end()) throw ValidationError("no such table: " + name);
  return it->second;
}

}  // namespace dwkit
