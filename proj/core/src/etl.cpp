#include "dwkit/etl.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dwkit/campus_schema.hpp"
#include "dwkit/ips.hpp"

#include "json.hpp"

namespace dwkit {

namespace {

// Field-name based row accessors over an OLTP table.
struct Cols {
  const Table* table;
  std::map<std::string, int> idx;

  explicit Cols(const Table& t) : table(&t) {
    for (size_t i = 0; i < t.schema().fields.size(); ++i)
      idx[t.schema().fields[i].name] = static_cast<int>(i);
  }
  const Value& get(const Row& row, const std::string& field) const { return row[idx.at(field)]; }
  std::string text(const Row& row, const std::string& field) const {
    return std::string(trimmed(text_of(get(row, field))));
  }
  int64_t num(const Row& row, const std::string& field) const { return int_of(get(row, field)); }
};

struct SourceIndex {
  const Database* db;
  Cols mhs, prodi, fak, krs, jadkul, dosen, matkul;
  std::unordered_map<std::string, const Row*> student_by_nim;
  std::unordered_map<std::string, std::string> fak_name;     // kdfak -> nmfakultas
  std::unordered_map<std::string, const Row*> course_by_kdmk;
  std::unordered_map<std::string, const Row*> dosen_by_kddos;

  explicit SourceIndex(const Database& oltp)
      : db(&oltp),
        mhs(oltp.table("MMAHASISWA")),
        prodi(oltp.table("MPRODI")),
        fak(oltp.table("MFAKULTAS")),
        krs(oltp.table("TRKRS")),
        jadkul(oltp.table("TJADKUL")),
        dosen(oltp.table("TDOSFAK")),
        matkul(oltp.table("MTBMTKL")) {
    for (const auto& r : mhs.table->rows()) student_by_nim[mhs.text(r, "nim")] = &r;
    for (const auto& r : fak.table->rows()) fak_name[fak.text(r, "kdfak")] = fak.text(r, "nmfakultas");
    for (const auto& r : matkul.table->rows()) course_by_kdmk[matkul.text(r, "kdmk")] = &r;
    for (const auto& r : dosen.table->rows()) dosen_by_kddos[dosen.text(r, "kddos")] = &r;
  }

  const Row& student(const std::string& nim) const {
    auto it = student_by_nim.find(nim);
    if (it == student_by_nim.end())
      throw ValidationError("referential gap: TRKRS row for unknown student " + nim);
    return *it->second;
  }
};

}  // namespace

Warehouse Warehouse::create(WarehouseSchema schema) {
  Warehouse wh;
  wh.schema = std::move(schema);
  wh.db.kind = "warehouse";

  auto add_table = [&](const TableSchema& ts, const std::vector<std::string>& key) {
    // History tables: the same business key recurs across validity rows, so
    // primary-key uniqueness is not enforced here.
    wh.db.tables.emplace(ts.name, Table(ts, /*enforce_unique_pk=*/false));
    WarehouseTableInfo info;
    info.tglmula_idx = ts.field_index("tglmula");
    info.tglakhir_idx = ts.field_index("tglakhir");
    for (const auto& k : key) info.key_idx.push_back(ts.field_index(k));
    for (size_t i = 0; i < ts.fields.size(); ++i) {
      int idx = static_cast<int>(i);
      if (idx == info.tglmula_idx || idx == info.tglakhir_idx) continue;
      bool is_key = false;
      for (int k : info.key_idx) is_key = is_key || k == idx;
      if (!is_key) info.payload_idx.push_back(idx);
    }
    wh.info.emplace(ts.name, std::move(info));
  };

  for (const auto& d : wh.schema.shared_dims) add_table(d, d.primary_key);
  for (const auto& s : wh.schema.facts) add_table(s.fact, s.business_key);
  return wh;
}

std::map<std::string, StagedRows> extract_transform(const Database& oltp,
                                                    const WarehouseSchema& wh) {
  if (oltp.kind != "oltp") throw ValidationError("extract_transform expects an oltp database");
  SourceIndex src(oltp);
  std::map<std::string, StagedRows> staged;
  for (const TableSchema* t : wh.all_tables()) staged[t->name];

  // WPRODI: snowflake-flattened study programs.
  {
    StagedRows& out = staged.at("WPRODI");
    for (const auto& r : src.prodi.table->rows()) {
      std::string kdfak = src.prodi.text(r, "kdfak");
      auto fit = src.fak_name.find(kdfak);
      if (fit == src.fak_name.end())
        throw ValidationError("referential gap: MPRODI references unknown faculty " + kdfak);
      out[{src.prodi.text(r, "kdprodi")}] = {src.prodi.text(r, "nmprodi"), fit->second,
                                             src.prodi.text(r, "kdjenjang")};
    }
  }

  // WDATA1: student counts by (prodi, gender, cohort).
  {
    std::map<std::vector<Value>, int64_t, ValueVecLess> counts;
    for (const auto& r : src.mhs.table->rows()) {
      counts[{src.mhs.text(r, "kdprodi"), src.mhs.text(r, "jkel"), src.mhs.num(r, "angkatan")}]++;
    }
    StagedRows& out = staged.at("WDATA1");
    for (auto& [key, n] : counts) out[key] = {Value(n)};
  }

  // Enrollment-driven facts share one pass over TRKRS.
  std::map<std::vector<Value>, std::set<std::string>, ValueVecLess> aktif;  // cell -> nims
  std::map<std::vector<Value>, int64_t, ValueVecLess> grade_counts;
  std::map<std::vector<Value>, std::vector<GradedUnit>, ValueVecLess> per_student_term;
  for (const auto& r : src.krs.table->rows()) {
    std::string nim = src.krs.text(r, "nim");
    const Row& stu = src.student(nim);
    std::string jkel = src.mhs.text(stu, "jkel");
    int64_t thajar = src.krs.num(r, "thajar");
    std::string smt = src.krs.text(r, "smt");
    std::string kdprodi = src.krs.text(r, "kdprodi");
    int64_t angkatan = src.krs.num(r, "angkatan");
    std::string grade = src.krs.text(r, "grade");

    aktif[{thajar, smt, kdprodi, jkel, angkatan}].insert(nim);
    grade_counts[{thajar, smt, kdprodi, jkel, angkatan, grade}]++;
    per_student_term[{nim, thajar, smt, kdprodi, angkatan}].push_back(
        {grade, static_cast<int>(src.krs.num(r, "sks"))});
  }

  {
    StagedRows& out = staged.at("WAKTIF");
    for (auto& [key, nims] : aktif) out[key] = {Value(static_cast<int64_t>(nims.size()))};
  }
  {
    StagedRows& out = staged.at("WGRADE");
    for (auto& [key, n] : grade_counts) out[key] = {Value(n)};
  }
  {
    // Grade-index categories: one vote per student-term with a defined index.
    std::map<std::vector<Value>, int64_t, ValueVecLess> cat_counts;
    for (auto& [key, units] : per_student_term) {
      auto ips = compute_ips(units);
      if (!ips) continue;
      std::string kategori = ips_category_name(classify_ips(*ips));
      cat_counts[{key[1], key[2], key[3], key[4], kategori}]++;
    }
    StagedRows& out = staged.at("WIPS");
    for (auto& [key, n] : cat_counts) out[key] = {Value(n)};
  }

  // WJADKUL: flattened schedule, one row per entry.
  {
    StagedRows& out = staged.at("WJADKUL");
    for (const auto& r : src.jadkul.table->rows()) {
      std::string kddos = src.jadkul.text(r, "kddos");
      std::string kdmk = src.jadkul.text(r, "kdmk");
      auto dit = src.dosen_by_kddos.find(kddos);
      if (dit == src.dosen_by_kddos.end())
        throw ValidationError("referential gap: TJADKUL references unknown lecturer " + kddos);
      auto cit = src.course_by_kdmk.find(kdmk);
      if (cit == src.course_by_kdmk.end())
        throw ValidationError("referential gap: TJADKUL references unknown course " + kdmk);
      out[{src.jadkul.num(r, "thajar"), src.jadkul.text(r, "smt"), kddos, kdmk,
           src.jadkul.text(r, "kelompok")}] = {
          src.dosen.text(*dit->second, "nmdos"), src.matkul.text(*cit->second, "nmsingkat"),
          src.matkul.num(*cit->second, "sks"), src.matkul.text(*cit->second, "nmpembina")};
    }
  }

  return staged;
}

LoadStats constructive_merge(Table& target, const WarehouseTableInfo& info,
                             const StagedRows& staged, Date load_date,
                             const std::optional<KeySet>& scope) {
  LoadStats stats;
  stats.load_date = load_date;

  std::map<std::vector<Value>, size_t, ValueVecLess> open_rows;
  for (size_t i = 0; i < target.rows().size(); ++i) {
    const Row& row = target.rows()[i];
    if (!date_of(row[info.tglakhir_idx]).is_open()) continue;
    if (date_of(row[info.tglmula_idx]) > load_date)
      throw ValidationError(target.schema().name + ": load date " + load_date.str() +
                            " precedes an open row's tglmula");
    std::vector<Value> key;
    for (int k : info.key_idx) key.push_back(row[k]);
    open_rows.emplace(std::move(key), i);
  }

  auto close_row = [&](size_t pos) {
    target.update_field(pos, info.tglakhir_idx, Value(load_date));
    stats.closed++;
  };
  auto insert_row = [&](const std::vector<Value>& key, const std::vector<Value>& payload) {
    Row row(target.schema().fields.size());
    for (size_t i = 0; i < info.key_idx.size(); ++i) row[info.key_idx[i]] = key[i];
    for (size_t i = 0; i < info.payload_idx.size(); ++i) row[info.payload_idx[i]] = payload[i];
    row[info.tglmula_idx] = Value(load_date);
    row[info.tglakhir_idx] = Value(Date::open());
    target.insert(std::move(row));
    stats.inserted++;
  };

  for (const auto& [key, payload] : staged) {
    if (key.size() != info.key_idx.size() || payload.size() != info.payload_idx.size())
      throw ValidationError(target.schema().name + ": staged row shape mismatch");
    auto it = open_rows.find(key);
    if (it == open_rows.end()) {
      insert_row(key, payload);
      continue;
    }
    const Row& current = target.rows()[it->second];
    bool same = true;
    for (size_t i = 0; i < info.payload_idx.size() && same; ++i)
      same = values_equal(current[info.payload_idx[i]], payload[i]);
    if (same) {
      stats.unchanged++;
    } else {
      close_row(it->second);
      insert_row(key, payload);
    }
  }

  // Disappearance is a logical delete: the open row is closed, history stays.
  for (const auto& [key, pos] : open_rows) {
    if (staged.count(key) > 0) continue;
    if (scope && scope->count(key) == 0) continue;
    close_row(pos);
  }
  return stats;
}

std::vector<Row> current_view(const Table& table, Date as_of) {
  int mula = table.schema().field_index("tglmula");
  int akhir = table.schema().field_index("tglakhir");
  if (mula < 0 || akhir < 0)
    throw ValidationError(table.schema().name + " is not effective-dated");
  std::vector<Row> out;
  for (const auto& row : table.rows()) {
    if (date_of(row[mula]) <= as_of && as_of < date_of(row[akhir])) out.push_back(row);
  }
  return out;
}

namespace {

// ---- diff-driven staging -------------------------------------------------

struct TableDiff {
  // primary-key encodings of rows that were added, removed, or whose payload
  // changed between the two snapshots
  std::set<std::string> changed;
};

TableDiff diff_table(const Table& oldt, const Table& newt) {
  TableDiff d;
  auto key_of = [](const Table& t, const Row& r) {
    std::string key;
    for (const auto& pk : t.schema().primary_key) {
      key += value_key(r[t.schema().field_index(pk)]);
      key.push_back('\x1f');
    }
    return key;
  };
  std::unordered_map<std::string, const Row*> old_rows;
  for (const auto& r : oldt.rows()) old_rows[key_of(oldt, r)] = &r;
  std::unordered_map<std::string, const Row*> new_rows;
  for (const auto& r : newt.rows()) new_rows[key_of(newt, r)] = &r;

  for (const auto& [k, row] : new_rows) {
    auto it = old_rows.find(k);
    if (it == old_rows.end()) {
      d.changed.insert(k);
      continue;
    }
    const Row& a = *it->second;
    const Row& b = *row;
    for (size_t i = 0; i < a.size(); ++i) {
      if (!values_equal(a[i], b[i])) {
        d.changed.insert(k);
        break;
      }
    }
  }
  for (const auto& [k, row] : old_rows) {
    if (new_rows.find(k) == new_rows.end()) d.changed.insert(k);
  }
  return d;
}

// Business keys whose staged value can differ between the snapshots, per
// warehouse table. Over-approximation is fine: restaging an untouched key
// reconciles to "unchanged".
std::map<std::string, KeySet> affected_keys(const Database& olddb, const Database& newdb) {
  std::map<std::string, KeySet> out;

  auto add = [&](const std::string& table, std::vector<Value> key) {
    out[table].insert(std::move(key));
  };

  TableDiff mhs_diff = diff_table(olddb.table("MMAHASISWA"), newdb.table("MMAHASISWA"));
  TableDiff krs_diff = diff_table(olddb.table("TRKRS"), newdb.table("TRKRS"));
  TableDiff prodi_diff = diff_table(olddb.table("MPRODI"), newdb.table("MPRODI"));
  TableDiff fak_diff = diff_table(olddb.table("MFAKULTAS"), newdb.table("MFAKULTAS"));
  TableDiff jenjang_diff = diff_table(olddb.table("MJENJANG"), newdb.table("MJENJANG"));
  TableDiff jadkul_diff = diff_table(olddb.table("TJADKUL"), newdb.table("TJADKUL"));
  TableDiff dosen_diff = diff_table(olddb.table("TDOSFAK"), newdb.table("TDOSFAK"));
  TableDiff matkul_diff = diff_table(olddb.table("MTBMTKL"), newdb.table("MTBMTKL"));

  // Students whose own record or any enrollment changed.
  std::set<std::string> touched_nims;
  auto first_key_part = [](const std::string& enc) {
    return enc.substr(0, enc.find('\x1f'));
  };
  for (const auto& k : mhs_diff.changed) touched_nims.insert(first_key_part(k));
  for (const auto& k : krs_diff.changed) touched_nims.insert(first_key_part(k));

  for (const Database* db : {&olddb, &newdb}) {
    Cols mhs(db->table("MMAHASISWA"));
    Cols krs(db->table("TRKRS"));
    std::unordered_map<std::string, const Row*> stu;
    for (const auto& r : mhs.table->rows()) stu[mhs.text(r, "nim")] = &r;

    for (const auto& r : mhs.table->rows()) {
      std::string nim = mhs.text(r, "nim");
      if (touched_nims.count(nim) == 0) continue;
      add("WDATA1", {mhs.text(r, "kdprodi"), mhs.text(r, "jkel"), mhs.num(r, "angkatan")});
    }

    for (const auto& r : krs.table->rows()) {
      std::string nim = krs.text(r, "nim");
      if (touched_nims.count(nim) == 0) continue;
      auto sit = stu.find(nim);
      std::string jkel = sit != stu.end() ? mhs.text(*sit->second, "jkel") : std::string();
      int64_t thajar = krs.num(r, "thajar");
      std::string smt = krs.text(r, "smt");
      std::string kdprodi = krs.text(r, "kdprodi");
      int64_t angkatan = krs.num(r, "angkatan");
      add("WAKTIF", {thajar, smt, kdprodi, jkel, angkatan});
      add("WGRADE", {thajar, smt, kdprodi, jkel, angkatan, krs.text(r, "grade")});
      // The student's index can move between categories; cover all three.
      for (const char* cat : {"K", "C", "B"})
        add("WIPS", {thajar, smt, kdprodi, angkatan, std::string(cat)});
    }
  }

  // Program dimension: direct changes plus faculty/level renames upstream.
  for (const Database* db : {&olddb, &newdb}) {
    Cols prodi(db->table("MPRODI"));
    for (const auto& r : prodi.table->rows()) {
      std::string kdprodi = prodi.text(r, "kdprodi");
      bool hit = prodi_diff.changed.count(kdprodi + "\x1f") > 0;
      hit = hit || fak_diff.changed.count(prodi.text(r, "kdfak") + "\x1f") > 0;
      hit = hit || jenjang_diff.changed.count(prodi.text(r, "kdjenjang") + "\x1f") > 0;
      if (hit) add("WPRODI", {kdprodi});
    }
  }

  // Schedule fact: entry changes plus lecturer/course attribute changes.
  for (const Database* db : {&olddb, &newdb}) {
    Cols jadkul(db->table("TJADKUL"));
    for (const auto& r : jadkul.table->rows()) {
      int64_t thajar = jadkul.num(r, "thajar");
      std::string smt = jadkul.text(r, "smt");
      std::string kdmk = jadkul.text(r, "kdmk");
      std::string kelompok = jadkul.text(r, "kelompok");
      std::string kddos = jadkul.text(r, "kddos");
      std::string enc = std::to_string(thajar) + '\x1f' + smt + '\x1f' + kdmk + '\x1f' +
                        kelompok + '\x1f';
      bool hit = jadkul_diff.changed.count(enc) > 0;
      hit = hit || dosen_diff.changed.count(kddos + "\x1f") > 0;
      hit = hit || matkul_diff.changed.count(kdmk + "\x1f") > 0;
      if (hit) add("WJADKUL", {thajar, smt, kddos, kdmk, kelompok});
    }
  }

  return out;
}

}  // namespace

std::map<std::string, LoadStats> run_etl(const Database* old_snapshot,
                                         const Database& new_snapshot, Warehouse& wh,
                                         Date load_date) {
  if (new_snapshot.kind != "oltp") throw ValidationError("run_etl expects oltp snapshots");
  if (old_snapshot != nullptr) {
    if (old_snapshot->kind != "oltp") throw ValidationError("run_etl expects oltp snapshots");
    for (const auto& [name, table] : new_snapshot.tables) {
      if (!old_snapshot->has_table(name))
        throw ValidationError("incompatible snapshots: old one lacks table " + name);
      if (old_snapshot->table(name).schema().record_length != table.schema().record_length)
        throw ValidationError("incompatible snapshots: schema mismatch in " + name);
    }
  }

  std::map<std::string, StagedRows> staged = extract_transform(new_snapshot, wh.schema);
  std::map<std::string, LoadStats> result;

  if (old_snapshot == nullptr) {
    for (auto& [name, rows] : staged)
      result[name] = constructive_merge(wh.db.table(name), wh.info.at(name), rows, load_date);
    return result;
  }

  std::map<std::string, KeySet> affected = affected_keys(*old_snapshot, new_snapshot);
  for (auto& [name, rows] : staged) {
    const KeySet& keys = affected[name];
    StagedRows subset;
    for (const auto& key : keys) {
      auto it = rows.find(key);
      if (it != rows.end()) subset.insert(*it);
    }
    result[name] =
        constructive_merge(wh.db.table(name), wh.info.at(name), subset, load_date, keys);
  }
  return result;
}

// ---- persistence -----------------------------------------------------------

void save_warehouse(const Warehouse& wh, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream meta(fs::path(dir) / "warehouse.meta", std::ios::binary);
    if (!meta) throw ValidationError("cannot write warehouse meta in " + dir);
    meta << "dwkit-warehouse v1\n" << describe(wh.schema);
  }
  for (const auto& [name, table] : wh.db.tables) {
    std::ofstream f(fs::path(dir) / (name + ".tbl"), std::ios::binary);
    if (!f) throw ValidationError("cannot write warehouse table " + name);
    const auto& fields = table.schema().fields;
    f << "table " << name << " " << fields.size() << " " << table.row_count() << "\n";
    for (size_t i = 0; i < fields.size(); ++i) f << (i ? "|" : "") << fields[i].name;
    f << "\n";
    const WarehouseTableInfo& info = wh.info.at(name);
    std::vector<size_t> order(table.rows().size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      const Row& ra = table.rows()[a];
      const Row& rb = table.rows()[b];
      for (int k : info.key_idx) {
        int c = compare_values(ra[k], rb[k]);
        if (c != 0) return c < 0;
      }
      return date_of(ra[info.tglmula_idx]) < date_of(rb[info.tglmula_idx]);
    });
    for (size_t pos : order) {
      const Row& row = table.rows()[pos];
      for (size_t i = 0; i < row.size(); ++i) {
        const FieldSpec& spec = fields[i];
        f << (i ? "|" : "")
          << (spec.kind == FieldKind::Date ? date_of(row[i]).str() : value_str(row[i]));
      }
      f << "\n";
    }
    f << "end\n";
  }
}

Warehouse load_warehouse(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::exists(fs::path(dir) / "warehouse.meta"))
    throw ValidationError("not a warehouse directory: " + dir);
  Warehouse wh = Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
  for (auto& [name, table] : wh.db.tables) {
    std::ifstream f(fs::path(dir) / (name + ".tbl"), std::ios::binary);
    if (!f) throw ValidationError("warehouse table file missing: " + name);
    std::string line;
    if (!std::getline(f, line) || line.rfind("table " + name + " ", 0) != 0)
      throw ValidationError("malformed warehouse table " + name);
    size_t n_rows = 0;
    {
      std::istringstream hdr(line);
      std::string tag, tname;
      size_t n_fields;
      hdr >> tag >> tname >> n_fields >> n_rows;
      if (n_fields != table.schema().fields.size())
        throw ValidationError("warehouse table " + name + " has a different field layout");
    }
    if (!std::getline(f, line)) throw ValidationError("malformed warehouse table " + name);
    for (size_t r = 0; r < n_rows; ++r) {
      if (!std::getline(f, line)) throw ValidationError("truncated warehouse table " + name);
      Row row;
      size_t start = 0;
      const auto& fields = table.schema().fields;
      for (size_t i = 0; i < fields.size(); ++i) {
        size_t sep = i + 1 < fields.size() ? line.find('|', start) : line.size();
        if (sep == std::string::npos)
          throw ValidationError("short record in warehouse table " + name);
        std::string cell = line.substr(start, sep - start);
        switch (fields[i].kind) {
          case FieldKind::Integer: row.push_back(static_cast<int64_t>(std::stoll(cell))); break;
          case FieldKind::Decimal: row.push_back(std::stod(cell)); break;
          case FieldKind::Date: row.push_back(Date::parse(cell)); break;
          default: row.push_back(cell); break;
        }
        start = sep + 1;
      }
      table.insert(std::move(row));
    }
    if (!std::getline(f, line) || line != "end")
      throw ValidationError("missing end marker in warehouse table " + name);
  }
  return wh;
}

std::string load_report_text(const std::map<std::string, LoadStats>& stats) {
  std::ostringstream out;
  for (const auto& [name, st] : stats) {
    out << name << ": inserted " << st.inserted << ", closed " << st.closed << ", unchanged "
        << st.unchanged << " (load date " << st.load_date.str() << ")\n";
  }
  return out.str();
}

std::string load_report_json(const std::map<std::string, LoadStats>& stats) {
  nlohmann::json j;
  for (const auto& [name, st] : stats) {
    j["tables"][name] = {{"inserted", st.inserted},
                         {"closed", st.closed},
                         {"unchanged", st.unchanged}};
    j["load_date"] = st.load_date.str();
  }
  return j.dump(2);
}

}  // namespace dwkit
