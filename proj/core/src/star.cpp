#include "dwkit/star.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dwkit {

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool same_structure(const TableSchema& a, const TableSchema& b) {
  if (a.name != b.name || a.fields.size() != b.fields.size()) return false;
  for (size_t i = 0; i < a.fields.size(); ++i) {
    const auto& fa = a.fields[i];
    const auto& fb = b.fields[i];
    if (fa.name != fb.name || fa.kind != fb.kind || fa.width != fb.width ||
        fa.enum_values != fb.enum_values)
      return false;
  }
  return true;
}

void append_validity_dates(std::vector<FieldSpec>& fields) {
  fields.push_back(date_field("tglmula"));
  fields.push_back(date_field("tglakhir"));
}

bool chain_covers(const DimensionSpec& retained, const DimensionSpec& dim) {
  if (dim.source_tables.empty()) return false;
  for (const auto& t : dim.source_tables) {
    if (std::find(retained.source_tables.begin(), retained.source_tables.end(), t) ==
        retained.source_tables.end())
      return false;
  }
  return true;
}

}  // namespace

const char* elim_reason_name(ElimReason r) {
  switch (r) {
    case ElimReason::LowCardinality: return "low_cardinality";
    case ElimReason::SingleAttribute: return "single_attribute";
    case ElimReason::DisplayOnly: return "display_only";
  }
  return "?";
}

TableSchema merge_snowflake(const DimensionSpec& dim, const OltpSchema& oltp) {
  if (dim.source_tables.empty())
    throw ValidationError("dimension '" + dim.name + "' has no source tables to merge");

  // The chain must be navigable: each non-head table is reachable through a
  // declared foreign key from some earlier chain member.
  const std::string& head = dim.source_tables.front();
  for (size_t i = 1; i < dim.source_tables.size(); ++i) {
    const std::string& target = dim.source_tables[i];
    bool linked = false;
    for (size_t j = 0; j < i && !linked; ++j) {
      for (const auto& fk : oltp.foreign_keys) {
        if (fk.table == dim.source_tables[j] && fk.ref_table == target) {
          linked = true;
          break;
        }
      }
    }
    if (!linked)
      throw ValidationError("broken snowflake chain: no key path from " + head + " to " + target);
  }

  std::vector<FieldSpec> fields = dim.attributes;
  append_validity_dates(fields);
  return define_table("W" + upper(dim.name), std::move(fields), {dim.key_attr});
}

StarSchema eliminate_dimensions(const HypercubeSpec& cube, const OltpSchema& oltp,
                                int inline_threshold) {
  StarSchema star;
  star.report_id = cube.report_id;
  star.title = cube.title;

  // First pass: which dimensions survive as tables.
  std::vector<const DimensionSpec*> retained;
  for (const auto& dim : cube.dimensions) {
    if (dim.cardinality < 1)
      throw ValidationError("dimension '" + dim.name + "' is missing cardinality metadata");
    bool inlined = dim.cardinality <= inline_threshold || dim.attributes.size() == 1 ||
                   dim.display_only;
    if (!inlined) retained.push_back(&dim);
  }

  std::vector<FieldSpec> fact_fields;
  auto add_fact_field = [&](const FieldSpec& f) {
    for (const auto& existing : fact_fields) {
      if (existing.name == f.name) return;
    }
    fact_fields.push_back(f);
  };

  for (const auto& dim : cube.dimensions) {
    bool is_retained =
        std::find(retained.begin(), retained.end(), &dim) != retained.end();
    if (is_retained) {
      TableSchema dim_table = merge_snowflake(dim, oltp);
      // The fact references the chain head's key.
      FieldSpec key;
      bool found = false;
      for (const auto& a : dim.attributes) {
        if (a.name == dim.key_attr) {
          key = a;
          found = true;
          break;
        }
      }
      if (!found) throw ValidationError("dimension key '" + dim.key_attr + "' not in attributes");
      add_fact_field(key);
      star.business_key.push_back(key.name);
      star.fact_dim_keys[key.name] = dim_table.name;
      star.dims.push_back(std::move(dim_table));
      continue;
    }

    EliminatedDim gone;
    gone.name = dim.name;
    if (dim.cardinality <= inline_threshold)
      gone.reason = ElimReason::LowCardinality;
    else if (dim.attributes.size() == 1)
      gone.reason = ElimReason::SingleAttribute;
    else
      gone.reason = ElimReason::DisplayOnly;

    // If a retained dimension's merged table already carries this
    // dimension's source data, nothing lands on the fact.
    const DimensionSpec* cover = nullptr;
    for (const DimensionSpec* r : retained) {
      if (chain_covers(*r, dim)) {
        cover = r;
        break;
      }
    }
    if (cover != nullptr) {
      gone.covered_by = "W" + upper(cover->name);
    } else {
      for (const auto& a : dim.attributes) {
        add_fact_field(a);
        if (a.name == dim.key_attr || !dim.display_only) star.business_key.push_back(a.name);
      }
    }
    star.eliminated.push_back(std::move(gone));
  }

  for (const auto& f : cube.detail_fields) {
    add_fact_field(f);
    star.business_key.push_back(f.name);
  }

  for (const auto& m : cube.measures) {
    add_fact_field(int_field(m.name, 8));
    star.measure_fields.push_back(m.name);
  }

  append_validity_dates(fact_fields);
  star.fact = define_table(cube.fact_name, std::move(fact_fields), star.business_key);
  return star;
}

WarehouseSchema derive_warehouse(const std::vector<StarSchema>& stars) {
  if (stars.empty()) throw ValidationError("warehouse derivation needs at least one star schema");
  WarehouseSchema wh;
  wh.facts = stars;
  for (const auto& star : wh.facts) {
    for (const auto& dim : star.dims) {
      bool found = false;
      for (const auto& existing : wh.shared_dims) {
        if (existing.name == dim.name) {
          if (!same_structure(existing, dim))
            throw ValidationError("dimension '" + dim.name +
                                  "' derived with conflicting structures");
          found = true;
          break;
        }
      }
      if (!found) wh.shared_dims.push_back(dim);
      wh.dim_usage[dim.name].push_back(star.fact.name);
    }
  }
  return wh;
}

WarehouseSchema derive_campus_warehouse(const OltpSchema& oltp, int inline_threshold) {
  std::vector<StarSchema> stars;
  for (const auto& cube : campus_hypercubes(oltp))
    stars.push_back(eliminate_dimensions(cube, oltp, inline_threshold));
  return derive_warehouse(stars);
}

std::vector<const TableSchema*> WarehouseSchema::all_tables() const {
  std::vector<const TableSchema*> out;
  for (const auto& d : shared_dims) out.push_back(&d);
  for (const auto& f : facts) out.push_back(&f.fact);
  return out;
}

const TableSchema& WarehouseSchema::table(const std::string& name) const {
  for (const TableSchema* t : all_tables()) {
    if (t->name == name) return *t;
  }
  throw ValidationError("no such warehouse table: " + name);
}

const StarSchema& WarehouseSchema::star(const std::string& fact_name) const {
  for (const auto& s : facts) {
    if (s.fact.name == fact_name) return s;
  }
  throw ValidationError("no such fact table: " + fact_name);
}

std::string describe(const WarehouseSchema& wh) {
  std::ostringstream out;
  out << "warehouse tables: " << wh.all_tables().size() << "\n";
  auto emit_fields = [&](const TableSchema& t) {
    out << "  fields:";
    for (const auto& f : t.fields) {
      out << " " << f.name << ":" << field_kind_name(f.kind) << "(" << f.width << ")";
    }
    out << "\n";
  };
  for (const auto& d : wh.shared_dims) {
    out << "dim " << d.name << " record=" << d.record_length << " key=";
    for (size_t i = 0; i < d.primary_key.size(); ++i) out << (i ? "," : "") << d.primary_key[i];
    out << " used_by=";
    const auto& users = wh.dim_usage.at(d.name);
    for (size_t i = 0; i < users.size(); ++i) out << (i ? "," : "") << users[i];
    out << "\n";
    emit_fields(d);
  }
  for (const auto& s : wh.facts) {
    out << "fact " << s.fact.name << " report=" << s.report_id
        << " record=" << s.fact.record_length << " key=";
    for (size_t i = 0; i < s.business_key.size(); ++i) out << (i ? "," : "") << s.business_key[i];
    out << " measures=";
    for (size_t i = 0; i < s.measure_fields.size(); ++i)
      out << (i ? "," : "") << s.measure_fields[i];
    if (s.measure_fields.empty()) out << "-";
    out << " dims=";
    for (size_t i = 0; i < s.dims.size(); ++i) out << (i ? "," : "") << s.dims[i].name;
    if (s.dims.empty()) out << "-";
    out << "\n";
    emit_fields(s.fact);
    out << "  eliminated:";
    for (const auto& e : s.eliminated) {
      out << " " << e.name << "[" << elim_reason_name(e.reason);
      if (!e.covered_by.empty()) out << "->" << e.covered_by;
      out << "]";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dwkit
