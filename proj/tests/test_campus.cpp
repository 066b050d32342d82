#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "dwkit/generator.hpp"
#include "dwkit/ips.hpp"
#include "dwkit/plan.hpp"
#include "dwkit/reports.hpp"
#include "dwkit/snapshot.hpp"
#include "oracle.hpp"

using namespace dwkit;

namespace {

// Exhaustive foreign-key resolution check.
void check_referential_integrity(const Database& db) {
  OltpSchema schema = build_oltp_schema();
  for (const auto& fk : schema.foreign_keys) {
    const Table& from = db.table(fk.table);
    const Table& to = db.table(fk.ref_table);
    int from_idx = from.schema().field_index(fk.field);
    REQUIRE(to.schema().primary_key.size() == 1);
    int to_idx = to.schema().field_index(to.schema().primary_key[0]);
    std::set<std::string> keys;
    for (const auto& r : to.rows()) keys.insert(value_key(r[to_idx]));
    for (const auto& r : from.rows()) {
      if (keys.count(value_key(r[from_idx])) == 0) {
        FAIL(fk.table, ".", fk.field, " dangles: ", value_key(r[from_idx]));
      }
    }
  }
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("the OLTP schema has eight tables totalling 1099 record bytes") {
  OltpSchema s = build_oltp_schema();
  CHECK(s.tables.size() == 8);
  int total = 0;
  for (const auto& t : s.tables) total += t.record_length;
  CHECK(total == 1099);
  CHECK(s.table("MMAHASISWA").record_length == 586);
  CHECK(s.table("MPRODI").record_length == 48);
  CHECK(s.table("MFAKULTAS").record_length == 65);
  CHECK(s.table("MJENJANG").record_length == 24);
  CHECK(s.table("TRKRS").record_length == 68);
  CHECK(s.table("TJADKUL").record_length == 88);
  CHECK(s.table("TDOSFAK").record_length == 73);
  CHECK(s.table("MTBMTKL").record_length == 147);
}

TEST_CASE("degree level master carries codes 50 and 30 plus one reserve") {
  Database db = generate(GenConfig::desk(1));
  const Table& j = db.table("MJENJANG");
  REQUIRE(j.row_count() == 3);
  std::map<std::string, std::string> rows;
  for (const auto& r : j.rows())
    rows[value_str(r[0])] = value_str(r[1]);
  CHECK(rows.at("50") == "strata satu");
  CHECK(rows.at("30") == "diploma 3");
  CHECK(rows.count("20") == 1);
}

TEST_CASE("generation is deterministic per config and seed") {
  Database a = generate(GenConfig::desk(42));
  Database b = generate(GenConfig::desk(42));
  CHECK(snapshot_to_string(a) == snapshot_to_string(b));
  Database c = generate(GenConfig::desk(43));
  CHECK(snapshot_to_string(a) != snapshot_to_string(c));
}

TEST_CASE("generated data is referentially consistent") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    Database db = generate(GenConfig::desk(seed));
    check_referential_integrity(db);
    CHECK(db.table("MMAHASISWA").row_count() == 200);
    CHECK(db.table("TRKRS").row_count() == 800);
  }
}

TEST_CASE("inconsistent generation counts are rejected") {
  GenConfig c;
  c.students = 10;
  c.prodi = 0;
  CHECK_THROWS_AS(generate(c), ValidationError);
  GenConfig k = GenConfig::desk(1);
  k.krs = 10;
  k.students = 0;
  CHECK_THROWS_AS(generate(k), ValidationError);
}

TEST_CASE("full preset reproduces the reference capacity table") {
  Database db = generate(GenConfig::paper(1));
  struct Expect {
    const char* table;
    int length;
    int64_t count;
    int64_t bytes;
  };
  const Expect expected[] = {
      {"MMAHASISWA", 586, 42977, 25184522}, {"MPRODI", 48, 16, 768},
      {"MFAKULTAS", 65, 7, 455},            {"MJENJANG", 24, 3, 72},
      {"TRKRS", 68, 84774, 5764632},        {"TJADKUL", 88, 1988, 174944},
      {"TDOSFAK", 73, 386, 28178},          {"MTBMTKL", 147, 1020, 149940},
  };
  int64_t total_len = 0, total_count = 0, total_bytes = 0;
  for (const auto& e : expected) {
    TableStats st = db.table(e.table).stats();
    CHECK(st.record_length == e.length);
    CHECK(st.record_count == e.count);
    CHECK(st.total_bytes == e.bytes);
    total_len += st.record_length;
    total_count += st.record_count;
    total_bytes += st.total_bytes;
  }
  CHECK(total_len == 1099);
  CHECK(total_count == 131171);
  CHECK(total_bytes == 31303511);

  SUBCASE("the headline report grain is pinned to 279 cells for any seed") {
    CHECK(oracle::wdata1_cells(db).size() == 279);
  }
}

TEST_CASE("small seeded generation matches the brute-force tally") {
  GenConfig c = GenConfig::desk(7);
  c.students = 100;
  c.krs = 400;
  Database db = generate(c);
  auto result = run_report(1, "oltp", db, Date::of(2010, 1, 1));
  const ReportDefinition& def = report_definition(1);
  CHECK(oracle::result_cells(result.rows, def.grain, "jumlah") == oracle::report1(db));
}

TEST_CASE("compute_ips follows the stated grade weighting") {
  CHECK(*compute_ips({{"A", 3}, {"C", 3}}) == doctest::Approx(3.0));
  CHECK_FALSE(compute_ips({{"-", 3}}).has_value());
  CHECK_FALSE(compute_ips({}).has_value());
  CHECK(*compute_ips({{"A", 2}, {"-", 4}}) == doctest::Approx(4.0));
}

TEST_CASE("compute_ips matches an independent recomputation on random fixtures") {
  std::mt19937_64 rng(20);
  const char* letters[] = {"A", "B", "C", "D", "E", "-"};
  const int points[] = {4, 3, 2, 1, 0, -1};
  for (int student = 0; student < 20; ++student) {
    std::vector<GradedUnit> units;
    double weighted = 0;
    double credits = 0;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      int g = static_cast<int>(rng() % 6);
      int sks = 1 + static_cast<int>(rng() % 4);
      units.push_back({letters[g], sks});
      if (points[g] >= 0) {
        weighted += points[g] * sks;
        credits += sks;
      }
    }
    auto ips = compute_ips(units);
    if (credits == 0) {
      CHECK_FALSE(ips.has_value());
    } else {
      REQUIRE(ips.has_value());
      CHECK(*ips == doctest::Approx(weighted / credits));
      CHECK(*ips >= 0.0);
      CHECK(*ips <= 4.0);
    }
  }
}

TEST_CASE("snapshots round-trip losslessly") {
  Database db = generate(GenConfig::desk(9));
  auto path = temp_file("dwkit_snapshot_test.snap");
  save_snapshot(db, path.string());
  Database loaded = load_snapshot(path.string());
  for (const auto& [name, table] : db.tables) {
    TableStats a = table.stats();
    TableStats b = loaded.table(name).stats();
    CHECK(a.record_length == b.record_length);
    CHECK(a.record_count == b.record_count);
    CHECK(a.total_bytes == b.total_bytes);
  }
  CHECK(snapshot_to_string(loaded) == snapshot_to_string(db));
  std::filesystem::remove(path);
}

TEST_CASE("a full-preset snapshot reloads with all 131171 records") {
  Database db = generate(GenConfig::paper(2));
  auto path = temp_file("dwkit_paper_snapshot.snap");
  save_snapshot(db, path.string());
  Database loaded = load_snapshot(path.string());
  int64_t total = 0;
  for (const auto& [name, table] : loaded.tables) total += table.row_count();
  CHECK(total == 131171);
  std::filesystem::remove(path);
}

TEST_CASE("truncated snapshot files are rejected") {
  Database db = generate(GenConfig::desk(9));
  std::string text = snapshot_to_string(db);
  text.resize(text.size() / 2);
  CHECK_THROWS_AS(snapshot_from_string(text), ValidationError);
  CHECK_THROWS_AS(snapshot_from_string("not a snapshot\n"), ValidationError);
}

TEST_CASE("config hash mismatches surface as a warning") {
  Database db = generate(GenConfig::desk(9));
  std::string warn;
  snapshot_from_string(snapshot_to_string(db), &warn, GenConfig::desk(10).hash());
  CHECK_FALSE(warn.empty());
  warn.clear();
  snapshot_from_string(snapshot_to_string(db), &warn, GenConfig::desk(9).hash());
  CHECK(warn.empty());
}

TEST_CASE("the engineered fixture is a valid campus snapshot") {
  Database db = build_table2_fixture();
  check_referential_integrity(db);
  CHECK(db.table("MPRODI").row_count() == 16);
  CHECK(db.table("TJADKUL").row_count() == 303);
  CHECK(oracle::wdata1_cells(db).size() == 279);
  CHECK(oracle::waktif_cells(db).size() == 74);
  CHECK(oracle::wips_cells(db).size() == 98);
  CHECK(oracle::wgrade_cells(db).size() == 368);
}
