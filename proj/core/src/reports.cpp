#include "dwkit/reports.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace dwkit {

std::vector<std::string> ReportDefinition::columns() const {
  std::vector<std::string> out = grain;
  out.insert(out.end(), measures.begin(), measures.end());
  return out;
}

const std::vector<ReportDefinition>& report_catalog() {
  static const std::vector<ReportDefinition> catalog = {
      {1,
       "Students by degree level, study program, gender and cohort",
       {"kdjenjang", "kdprodi", "nmprodi", "nmfakultas", "jkel", "angkatan"},
       {"jumlah"}},
      {2,
       "Active students by term, degree level, study program, gender and cohort",
       {"thajar", "smt", "kdjenjang", "kdprodi", "nmprodi", "nmfakultas", "jkel", "angkatan"},
       {"jumlah"}},
      {3,
       "Semester grade-index composition by term, degree level, study program and cohort",
       {"thajar", "smt", "kdjenjang", "kdprodi", "nmprodi", "nmfakultas", "angkatan", "kategori"},
       {"jumlah"}},
      {4,
       "Grade composition by term, degree level, study program, gender and cohort",
       {"thajar", "smt", "kdjenjang", "kdprodi", "nmprodi", "nmfakultas", "jkel", "angkatan",
        "grade"},
       {"jumlah"}},
      {5,
       "Teaching assignments by term",
       {"thajar", "smt", "kdmk", "kelompok", "kddos", "nmdos", "nmsingkat", "sks", "nmpembina"},
       {}},
  };
  return catalog;
}

const ReportDefinition& report_definition(int id) {
  for (const auto& r : report_catalog()) {
    if (r.id == id) return r;
  }
  throw ValidationError("unknown report id: " + std::to_string(id));
}

namespace {

PlanPtr join_program_chain(PlanPtr input) {
  auto j1 = hash_join(std::move(input), scan("MPRODI"), {{"kdprodi", "kdprodi"}});
  auto j2 = hash_join(std::move(j1), scan("MFAKULTAS"), {{"kdfak", "kdfak"}});
  return hash_join(std::move(j2), scan("MJENJANG"), {{"kdjenjang", "kdjenjang"}});
}

Predicate current_at(Date as_of) {
  Predicate p;
  p.conjuncts.push_back(cmp("tglmula", CmpOp::Le, Value(as_of)));
  p.conjuncts.push_back(cmp("tglakhir", CmpOp::Gt, Value(as_of)));
  return p;
}

}  // namespace

PlanPtr build_oltp_plan(int id) {
  const ReportDefinition& def = report_definition(id);
  switch (id) {
    case 1: {
      auto joined = join_program_chain(scan("MMAHASISWA"));
      return group_aggregate(std::move(joined), def.grain, {{"jumlah", AggOp::Count, ""}});
    }
    case 2: {
      auto j = hash_join(scan("TRKRS"), scan("MMAHASISWA"), {{"nim", "nim"}});
      auto joined = join_program_chain(std::move(j));
      return group_aggregate(std::move(joined), def.grain,
                             {{"jumlah", AggOp::CountDistinct, "nim"}});
    }
    case 3: {
      // Two-stage aggregation: per student-term credit-weighted grade index,
      // bucketed to K/C/B, then counted per report cell.
      Predicate graded;
      graded.conjuncts.push_back(in_set(
          "grade", {Value(std::string("A")), Value(std::string("B")), Value(std::string("C")),
                    Value(std::string("D")), Value(std::string("E"))}));
      auto points = derive(scan("TRKRS", std::move(graded)),
                           {{"points", DeriveOp::GradePoints, "grade", ""},
                            {"bobot", DeriveOp::Multiply, "points", "sks"}});
      auto per_student =
          group_aggregate(std::move(points), {"nim", "thajar", "smt", "kdprodi", "angkatan"},
                          {{"total_bobot", AggOp::Sum, "bobot"}, {"total_sks", AggOp::Sum, "sks"}});
      auto classified = derive(std::move(per_student),
                               {{"ips", DeriveOp::Divide, "total_bobot", "total_sks"},
                                {"kategori", DeriveOp::IpsCategory, "ips", ""}});
      auto joined = join_program_chain(std::move(classified));
      return group_aggregate(std::move(joined), def.grain, {{"jumlah", AggOp::Count, ""}});
    }
    case 4: {
      auto j = hash_join(scan("TRKRS"), scan("MMAHASISWA"), {{"nim", "nim"}});
      auto joined = join_program_chain(std::move(j));
      return group_aggregate(std::move(joined), def.grain, {{"jumlah", AggOp::Count, ""}});
    }
    case 5: {
      auto j1 = hash_join(scan("TJADKUL"), scan("TDOSFAK"), {{"kddos", "kddos"}});
      auto j2 = hash_join(std::move(j1), scan("MTBMTKL"), {{"kdmk", "kdmk"}});
      auto j3 = hash_join(std::move(j2), scan("MFAKULTAS"), {{"kdfak", "kdfak"}});
      return group_aggregate(std::move(j3), def.grain, {});
    }
    default: throw ValidationError("unknown report id: " + std::to_string(id));
  }
}

PlanPtr build_dw_plan(int id, Date as_of) {
  const ReportDefinition& def = report_definition(id);
  static const char* kFactByReport[] = {"WDATA1", "WAKTIF", "WIPS", "WGRADE", "WJADKUL"};
  if (id < 1 || id > 5) throw ValidationError("unknown report id: " + std::to_string(id));
  const char* fact = kFactByReport[id - 1];
  if (id == 5) return group_aggregate(scan(fact, current_at(as_of)), def.grain, {});
  auto j = hash_join(scan(fact, current_at(as_of)), scan("WPRODI", current_at(as_of)),
                     {{"kdprodi", "kdprodi"}});
  return group_aggregate(std::move(j), def.grain, {{"jumlah", AggOp::Sum, "jumlah"}});
}

ReportResult run_report(int id, const std::string& backend, const Database& db, Date as_of) {
  report_definition(id);
  PlanPtr plan;
  if (backend == "oltp") {
    if (db.kind != "oltp")
      throw ValidationError("backend oltp needs an oltp database, got " + db.kind);
    plan = build_oltp_plan(id);
  } else if (backend == "dw") {
    if (db.kind != "warehouse")
      throw ValidationError("backend dw needs a warehouse database, got " + db.kind);
    plan = build_dw_plan(id, as_of);
  } else {
    throw ValidationError("unknown backend: " + backend);
  }
  QueryResult qr = run_metered(*plan, db);
  return {id, backend, std::move(qr.rows), qr.metrics};
}

namespace {

std::vector<std::vector<std::string>> project_rows(const ReportResult& r) {
  const ReportDefinition& def = report_definition(r.id);
  std::vector<int> idx;
  for (const auto& c : def.columns()) idx.push_back(r.rows.schema().field_index(c));
  std::vector<std::vector<std::string>> out;
  out.reserve(r.rows.rows().size());
  for (const auto& row : r.rows.rows()) {
    std::vector<std::string> cells;
    cells.reserve(idx.size());
    for (int i : idx) cells.push_back(value_str(row[i]));
    out.push_back(std::move(cells));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string join_cells(const std::vector<std::string>& cells) {
  std::string s;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) s += "|";
    s += cells[i];
  }
  return s;
}

}  // namespace

EquivalenceVerdict assert_equivalent(const ReportResult& oltp_result,
                                     const ReportResult& dw_result) {
  if (oltp_result.id != dw_result.id)
    throw ValidationError("equivalence check across different reports");
  EquivalenceVerdict v;
  auto a = project_rows(oltp_result);
  auto b = project_rows(dw_result);
  v.equivalent = a == b;
  if (v.equivalent) return v;

  constexpr size_t kMaxDiffs = 10;
  std::vector<std::vector<std::string>> only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  for (size_t i = 0; i < only_a.size() && v.diffs.size() < kMaxDiffs; ++i)
    v.diffs.push_back("only in oltp: " + join_cells(only_a[i]));
  for (size_t i = 0; i < only_b.size() && v.diffs.size() < kMaxDiffs; ++i)
    v.diffs.push_back("only in dw: " + join_cells(only_b[i]));
  return v;
}

std::string report_csv(const ReportResult& result) {
  const ReportDefinition& def = report_definition(result.id);
  std::ostringstream out;
  auto cols = def.columns();
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  std::vector<int> idx;
  for (const auto& c : cols) idx.push_back(result.rows.schema().field_index(c));
  for (const auto& row : result.rows.rows()) {
    for (size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << value_str(row[idx[i]]);
    out << "\n";
  }
  return out.str();
}

std::string report_json(const ReportResult& result) {
  const ReportDefinition& def = report_definition(result.id);
  nlohmann::json j;
  j["report"] = result.id;
  j["title"] = def.title;
  j["backend"] = result.backend;
  j["columns"] = def.columns();
  auto& rows = j["rows"] = nlohmann::json::array();
  std::vector<int> idx;
  for (const auto& c : def.columns()) idx.push_back(result.rows.schema().field_index(c));
  for (const auto& row : result.rows.rows()) {
    nlohmann::json jr = nlohmann::json::array();
    for (int i : idx) {
      const Value& v = row[i];
      switch (v.index()) {
        case 1: jr.push_back(std::get<int64_t>(v)); break;
        case 2: jr.push_back(std::get<double>(v)); break;
        default: jr.push_back(value_str(v)); break;
      }
    }
    rows.push_back(std::move(jr));
  }
  j["metrics"] = {{"tables_used", result.metrics.tables_used},
                  {"records_scanned", result.metrics.records_scanned},
                  {"record_length_sum", result.metrics.record_length_sum},
                  {"bytes_scanned", result.metrics.bytes_scanned},
                  {"wall_time_s", result.metrics.wall_time},
                  {"rows_produced", result.metrics.rows_produced}};
  return j.dump(2);
}

}  // namespace dwkit
