#include "dwkit/snapshot.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dwkit/campus_schema.hpp"

namespace dwkit {

namespace {

std::string encode_value(const Value& v, const FieldSpec& f) {
  if (f.kind == FieldKind::Date) {
    return date_of(v).str();  // keep the open sentinel explicit in files
  }
  return value_str(v);
}

Value decode_value(const std::string& s, const FieldSpec& f) {
  switch (f.kind) {
    case FieldKind::Text:
    case FieldKind::Enum: return Value(s);
    case FieldKind::Integer: {
      if (s.empty()) return Value(int64_t(0));
      return Value(static_cast<int64_t>(std::stoll(s)));
    }
    case FieldKind::Decimal: return Value(s.empty() ? 0.0 : std::stod(s));
    case FieldKind::Date: return Value(Date::parse(s));
  }
  return Value(s);
}

std::vector<size_t> pk_order(const Table& t) {
  std::vector<int> pk_idx;
  for (const auto& k : t.schema().primary_key) pk_idx.push_back(t.schema().field_index(k));
  std::vector<size_t> order(t.rows().size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    for (int idx : pk_idx) {
      int c = compare_values(t.rows()[a][idx], t.rows()[b][idx]);
      if (c != 0) return c < 0;
    }
    return false;
  });
  return order;
}

}  // namespace

std::string snapshot_to_string(const Database& db) {
  std::ostringstream out;
  char header[64];
  std::snprintf(header, sizeof(header), "%016" PRIx64, db.config_hash);
  out << "dwkit-snapshot v1 kind=" << db.kind << " config=" << header << "\n";
  for (const auto& [name, table] : db.tables) {
    out << "table " << name << " " << table.schema().fields.size() << " "
        << table.row_count() << "\n";
    for (size_t i = 0; i < table.schema().fields.size(); ++i)
      out << (i ? "|" : "") << table.schema().fields[i].name;
    out << "\n";
    for (size_t pos : pk_order(table)) {
      const Row& row = table.rows()[pos];
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "|" : "") << encode_value(row[i], table.schema().fields[i]);
      out << "\n";
    }
    out << "end\n";
  }
  return out.str();
}

void save_snapshot(const Database& db, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write snapshot: " + path);
  f << snapshot_to_string(db);
  if (!f) throw ValidationError("short write to snapshot: " + path);
}

Database snapshot_from_string(const std::string& text, std::string* warn,
                              std::optional<uint64_t> expect_config) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("dwkit-snapshot v1 ", 0) != 0)
    throw ValidationError("malformed snapshot: bad header");

  Database db;
  auto kind_pos = line.find("kind=");
  auto config_pos = line.find(" config=");
  if (kind_pos == std::string::npos || config_pos == std::string::npos)
    throw ValidationError("malformed snapshot: bad header");
  db.kind = line.substr(kind_pos + 5, config_pos - (kind_pos + 5));
  db.config_hash = std::stoull(line.substr(config_pos + 8), nullptr, 16);
  if (expect_config && *expect_config != db.config_hash && warn)
    *warn = "snapshot config hash does not match the expected generation config";

  OltpSchema schema = build_oltp_schema();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream hdr(line);
    std::string tag, name;
    size_t n_fields = 0, n_rows = 0;
    hdr >> tag >> name >> n_fields >> n_rows;
    if (tag != "table") throw ValidationError("malformed snapshot: expected table section");
    if (!schema.has_table(name)) throw ValidationError("malformed snapshot: unknown table " + name);
    const TableSchema& ts = schema.table(name);
    if (n_fields != ts.fields.size())
      throw ValidationError("malformed snapshot: field count mismatch in " + name);

    if (!std::getline(in, line)) throw ValidationError("malformed snapshot: truncated " + name);
    {
      std::string expected;
      for (size_t i = 0; i < ts.fields.size(); ++i)
        expected += (i ? "|" : "") + ts.fields[i].name;
      if (line != expected)
        throw ValidationError("malformed snapshot: field layout mismatch in " + name);
    }

    Table table(ts);
    for (size_t r = 0; r < n_rows; ++r) {
      if (!std::getline(in, line)) throw ValidationError("malformed snapshot: truncated " + name);
      Row row;
      row.reserve(ts.fields.size());
      size_t start = 0;
      for (size_t i = 0; i < ts.fields.size(); ++i) {
        size_t sep = i + 1 < ts.fields.size() ? line.find('|', start) : line.size();
        if (sep == std::string::npos)
          throw ValidationError("malformed snapshot: short record in " + name);
        row.push_back(decode_value(line.substr(start, sep - start), ts.fields[i]));
        start = sep + 1;
      }
      table.insert(std::move(row));
    }
    if (!std::getline(in, line) || line != "end")
      throw ValidationError("malformed snapshot: missing section end in " + name);
    db.tables.emplace(name, std::move(table));
  }

  // Every schema table must be present, even when empty.
  for (const auto& ts : schema.tables) {
    if (!db.has_table(ts.name))
      throw ValidationError("malformed snapshot: missing table " + ts.name);
  }
  return db;
}

Database load_snapshot(const std::string& path, std::string* warn,
                       std::optional<uint64_t> expect_config) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read snapshot: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return snapshot_from_string(buf.str(), warn, expect_config);
}

}  // namespace dwkit
