// Acceptance suite: runs the nine gate criteria end to end and prints one
// pass/fail line each. Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dwkit/efficiency.hpp"
#include "dwkit/etl.hpp"
#include "dwkit/generator.hpp"
#include "dwkit/ips.hpp"
#include "dwkit/reports.hpp"
#include "dwkit/snapshot.hpp"
#include "oracle.hpp"

using namespace dwkit;

namespace {

int failures = 0;
std::vector<std::string> notes;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    notes.push_back(what);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               t0)
             .count() /
         1000.0;
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> run;
};

Warehouse fresh_warehouse() {
  return Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
}

const Date kLoad = Date::of(2010, 1, 10);

// 1. Full-scale generation reproduces the transactional capacity table.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Database db = generate(GenConfig::paper(1));
  struct E {
    const char* t;
    int len;
    int64_t n;
    int64_t bytes;
  };
  const E rows[] = {
      {"MMAHASISWA", 586, 42977, 25184522}, {"MPRODI", 48, 16, 768},
      {"MFAKULTAS", 65, 7, 455},            {"MJENJANG", 24, 3, 72},
      {"TRKRS", 68, 84774, 5764632},        {"TJADKUL", 88, 1988, 174944},
      {"TDOSFAK", 73, 386, 28178},          {"MTBMTKL", 147, 1020, 149940},
  };
  int64_t tl = 0, tn = 0, tb = 0;
  for (const auto& e : rows) {
    TableStats st = db.table(e.t).stats();
    expect(st.record_length == e.len, std::string(e.t) + " record length");
    expect(st.record_count == e.n, std::string(e.t) + " record count");
    expect(st.total_bytes == e.bytes, std::string(e.t) + " total bytes");
    tl += st.record_length;
    tn += st.record_count;
    tb += st.total_bytes;
  }
  expect(tl == 1099, "total record length 1099");
  expect(tn == 131171, "total record count 131171");
  expect(tb == 31303511, "total bytes 31303511");
  expect(seconds_since(t0) < 60.0, "generation under 60 s");
}

// 2. The fixture warehouse reproduces the published warehouse capacity table.
void criterion2() {
  Database fixture = build_table2_fixture();
  Warehouse wh = fresh_warehouse();
  run_etl(nullptr, fixture, wh, kLoad);
  struct E {
    const char* t;
    int len;
    int64_t n;
  };
  const E rows[] = {{"WPRODI", 35, 16},  {"WJADKUL", 127, 303}, {"WGRADE", 44, 368},
                    {"WDATA1", 34, 279}, {"WAKTIF", 43, 74},    {"WIPS", 43, 98}};
  int64_t bytes = 0;
  for (const auto& e : rows) {
    TableStats st = wh.db.table(e.t).stats();
    expect(st.record_length == e.len, std::string(e.t) + " record length");
    expect(st.record_count == e.n, std::string(e.t) + " record count");
    bytes += st.total_bytes;
  }
  // Column arithmetic gives 72115; the reference table prints 71555, which
  // omits WPRODI's 560 bytes from its own sum.
  expect(bytes == 72115, "warehouse byte total computed as 72115");
}

// 3. The percentage formula over the two capacity totals.
void criterion3() {
  expect(std::fabs(efficiency_pct(1099, 326) - 237.12) < 0.005, "record length pct 237.12");
  expect(std::fabs(efficiency_pct(131171, 1138) - 11426.45) < 0.005, "record count pct 11426.45");
  expect(std::fabs(efficiency_pct(31303511, 71555) - 43647.48) < 0.005, "byte pct 43647.48");
}

// 4. Partial per-report golden: record-length sums and table counts from live
// runs, efficiency cells recomputed from the published value pairs.
void criterion4() {
  Database fixture = build_table2_fixture();
  Warehouse wh = fresh_warehouse();
  run_etl(nullptr, fixture, wh, kLoad);
  const int64_t oltp_tables[] = {4, 5, 4, 5, 4};
  const int64_t oltp_lengths[] = {723, 791, 205, 791, 373};
  const int64_t dw_tables[] = {2, 2, 2, 2, 1};
  const int64_t dw_lengths[] = {69, 78, 78, 79, 127};
  for (int id = 1; id <= 5; ++id) {
    auto o = run_report(id, "oltp", fixture, kLoad);
    auto d = run_report(id, "dw", wh.db, kLoad);
    expect(o.metrics.tables_used == oltp_tables[id - 1], "oltp tables, report " + std::to_string(id));
    expect(o.metrics.record_length_sum == oltp_lengths[id - 1],
           "oltp record length, report " + std::to_string(id));
    expect(d.metrics.tables_used == dw_tables[id - 1], "dw tables, report " + std::to_string(id));
    expect(d.metrics.record_length_sum == dw_lengths[id - 1],
           "dw record length, report " + std::to_string(id));
  }

  // Published pairs fed straight through the comparison; every printed
  // efficiency cell must come back. Managed-record and byte cells for
  // reports 2/3/5 are not independently derivable from the capacity table
  // and are asserted only through these printed pairs.
  struct Pairs {
    double oltp[5], dw[5], pct[5];
  };
  const Pairs blocks[6] = {
      {{25185855, 30255131, 5040609, 30225131, 352023},
       {10046, 3742, 4774, 16752, 38481},
       {250605.31, 808428.35, 105484.60, 180327.00, 814.80}},
      {{43004, 117111, 74134, 117111, 3384},
       {295, 90, 114, 384, 303},
       {14477.63, 130023.33, 64929.82, 30397.66, 1016.83}},
      {{723, 791, 205, 791, 373}, {69, 78, 78, 79, 127}, {947.83, 914.10, 162.82, 901.27, 193.70}},
      {{4, 5, 4, 5, 4}, {2, 2, 2, 2, 1}, {100, 150, 100, 150, 300}},
      {{3.13, 245.61, 439.68, 500.83, 119.15},
       {0.01, 0.01, 0.01, 0.01, 0.01},
       {31200, 2456000, 4396700, 5008200, 1191400}},
      {{279, 74, 3091, 368, 592}, {279, 74, 98, 368, 303}, {0, 0, 3054.08, 0, 95.38}},
  };
  std::map<int, QueryMetrics> oltp, dw;
  for (int i = 0; i < 5; ++i) {
    QueryMetrics a, b;
    a.bytes_scanned = static_cast<int64_t>(blocks[0].oltp[i]);
    b.bytes_scanned = static_cast<int64_t>(blocks[0].dw[i]);
    a.records_scanned = static_cast<int64_t>(blocks[1].oltp[i]);
    b.records_scanned = static_cast<int64_t>(blocks[1].dw[i]);
    a.record_length_sum = static_cast<int64_t>(blocks[2].oltp[i]);
    b.record_length_sum = static_cast<int64_t>(blocks[2].dw[i]);
    a.tables_used = static_cast<int64_t>(blocks[3].oltp[i]);
    b.tables_used = static_cast<int64_t>(blocks[3].dw[i]);
    a.wall_time = blocks[4].oltp[i];
    b.wall_time = blocks[4].dw[i];
    a.rows_produced = static_cast<int64_t>(blocks[5].oltp[i]);
    b.rows_produced = static_cast<int64_t>(blocks[5].dw[i]);
    oltp[i + 1] = a;
    dw[i + 1] = b;
  }
  EfficiencyReport report = comparison_report(oltp, dw);
  for (int bidx = 0; bidx < 6; ++bidx) {
    for (int i = 0; i < 5; ++i) {
      expect(report.blocks[bidx].cells[i].pct.has_value(),
             "defined pct " + std::to_string(bidx) + "/" + std::to_string(i));
      expect(std::fabs(*report.blocks[bidx].cells[i].pct - blocks[bidx].pct[i]) < 0.005,
             report.blocks[bidx].parameter + " pct, report " + std::to_string(i + 1));
    }
  }
}

// 5. Star derivation reproduces the six-table warehouse model.
void criterion5() {
  WarehouseSchema wh = derive_campus_warehouse(build_oltp_schema());
  expect(wh.all_tables().size() == 6, "six warehouse tables");
  expect(wh.shared_dims.size() == 1 && wh.shared_dims[0].name == "WPRODI", "one shared WPRODI");
  expect(wh.dim_usage.count("WPRODI") > 0 && wh.dim_usage.at("WPRODI").size() == 4,
         "WPRODI shared by four facts");
  for (const auto& star : wh.facts) {
    size_t want = star.fact.name == "WJADKUL" ? 0 : 1;
    expect(star.dims.size() == want, star.fact.name + " fact/dim split");
  }
  for (const TableSchema* t : wh.all_tables()) {
    size_t n = t->fields.size();
    expect(n >= 2 && t->fields[n - 2].name == "tglmula" && t->fields[n - 1].name == "tglakhir",
           t->name + " ends with the validity date pair");
  }
}

// 6. Equivalence across backends on 20 random desk-scale seeds, checked
// against the brute-force tally oracle.
void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Database db = generate(GenConfig::desk(seed));
    Warehouse wh = fresh_warehouse();
    run_etl(nullptr, db, wh, kLoad);
    for (int id = 1; id <= 5; ++id) {
      auto o = run_report(id, "oltp", db, kLoad);
      auto d = run_report(id, "dw", wh.db, kLoad);
      expect(assert_equivalent(o, d).equivalent,
             "equivalence seed " + std::to_string(seed) + " report " + std::to_string(id));

      const ReportDefinition& def = report_definition(id);
      bool oracle_ok = true;
      if (id == 5) {
        auto want = oracle::report5(db);
        oracle_ok = oracle::result_details(o.rows, def.columns()) == want &&
                    oracle::result_details(d.rows, def.columns()) == want;
      } else {
        oracle::Cells want;
        switch (id) {
          case 1: want = oracle::report1(db); break;
          case 2: want = oracle::report2(db); break;
          case 3: want = oracle::report3(db); break;
          default: want = oracle::report4(db); break;
        }
        oracle_ok = oracle::result_cells(o.rows, def.grain, "jumlah") == want &&
                    oracle::result_cells(d.rows, def.grain, "jumlah") == want;
      }
      expect(oracle_ok, "oracle seed " + std::to_string(seed) + " report " + std::to_string(id));
    }
  }
  expect(seconds_since(t0) < 120.0, "equivalence suite under 2 minutes");
}

// 7. Constructive-merge properties over randomized three-snapshot sequences.
void criterion7() {
  for (uint64_t seed : {11ull, 12ull, 13ull}) {
    GenConfig cfg = GenConfig::desk(seed);
    cfg.students = 120;
    cfg.krs = 500;
    Database s0 = generate(cfg);

    Database s1 = s0;
    {
      Table& krs = s1.table("TRKRS");
      int grade_idx = krs.schema().field_index("grade");
      for (size_t i = seed % 5; i < krs.rows().size(); i += 9)
        krs.update_field(i, grade_idx, Value(std::string("B")));
      s1.table("MMAHASISWA")
          .insert({std::string("2009888") + std::to_string(seed % 10) + "01",
                   std::string("Mahasiswa Baru"), std::string("W"), int64_t(2009),
                   std::string("P0003"), std::string()});
    }
    Database s2 = s1;
    {
      Table fresh(s2.table("TRKRS").schema());
      const Table& old = s2.table("TRKRS");
      for (size_t i = 0; i < old.rows().size(); ++i) {
        if (i % 11 != 0) fresh.insert(old.rows()[i]);
      }
      s2.tables.erase("TRKRS");
      s2.tables.emplace("TRKRS", std::move(fresh));
    }

    const Date dates[] = {kLoad, Date::of(2010, 2, 10), Date::of(2010, 3, 10)};
    const Database* snaps[] = {&s0, &s1, &s2};

    Warehouse diff_wh = fresh_warehouse();
    Warehouse full_wh = fresh_warehouse();
    std::map<std::string, int64_t> prior_counts;

    for (int step = 0; step < 3; ++step) {
      auto before = prior_counts;
      run_etl(step == 0 ? nullptr : snaps[step - 1], *snaps[step], diff_wh, dates[step]);
      run_etl(nullptr, *snaps[step], full_wh, dates[step]);
      for (const auto& [name, table] : diff_wh.db.tables) {
        if (!before.empty())
          expect(table.row_count() >= before.at(name), name + " rows never shrink");
        prior_counts[name] = table.row_count();
      }
    }

    // diff-driven == full restage, row for row
    for (const auto& [name, table] : full_wh.db.tables) {
      const Table& dt = diff_wh.db.table(name);
      bool same = dt.row_count() == table.row_count();
      if (same) {
        std::multiset<std::string> a, b;
        auto enc = [](const Table& t, std::multiset<std::string>& out) {
          for (const auto& r : t.rows()) {
            std::string s;
            for (const auto& v : r) {
              s += value_key(v);
              s.push_back('\x1f');
            }
            out.insert(std::move(s));
          }
        };
        enc(dt, a);
        enc(table, b);
        same = a == b;
      }
      expect(same, name + " diff-driven equals full restage, seed " + std::to_string(seed));
    }

    // idempotent re-run
    auto again = run_etl(snaps[2], *snaps[2], diff_wh, Date::of(2010, 4, 10));
    for (const auto& [name, st] : again)
      expect(st.inserted == 0 && st.closed == 0, name + " idempotent re-run");

    // single-open and interval invariants
    for (const auto& [name, table] : diff_wh.db.tables) {
      const WarehouseTableInfo& info = diff_wh.info.at(name);
      std::map<std::vector<Value>, std::vector<std::pair<Date, Date>>, ValueVecLess> spans;
      for (const auto& row : table.rows()) {
        std::vector<Value> key;
        for (int k : info.key_idx) key.push_back(row[k]);
        spans[key].emplace_back(date_of(row[info.tglmula_idx]),
                                date_of(row[info.tglakhir_idx]));
      }
      for (auto& [key, iv] : spans) {
        std::sort(iv.begin(), iv.end());
        int open = 0;
        bool ordered = true;
        for (size_t i = 0; i < iv.size(); ++i) {
          if (iv[i].second.is_open()) ++open;
          if (iv[i].first > iv[i].second) ordered = false;
          if (i > 0 && iv[i - 1].second > iv[i].first) ordered = false;
        }
        expect(open <= 1, name + " at most one open row per key");
        expect(ordered, name + " disjoint chronological intervals");
      }
    }

    // as-of queries reproduce each recorded historical state
    for (int step = 0; step < 3; ++step) {
      const Database& src = *snaps[step];
      auto want = oracle::wdata1_cells(src);
      auto got_rows = current_view(diff_wh.db.table("WDATA1"), dates[step]);
      bool ok = got_rows.size() == want.size();
      if (ok) {
        const Table& t = diff_wh.db.table("WDATA1");
        for (const auto& row : got_rows) {
          std::vector<std::string> key = {
              value_str(row[t.schema().field_index("kdprodi")]),
              value_str(row[t.schema().field_index("jkel")]),
              value_str(row[t.schema().field_index("angkatan")])};
          auto it = want.find(key);
          int64_t n = std::get<int64_t>(row[t.schema().field_index("jumlah")]);
          if (it == want.end() || it->second != n) {
            ok = false;
            break;
          }
        }
      }
      expect(ok, "as-of state step " + std::to_string(step) + " seed " + std::to_string(seed));
    }
  }
}

// 8. Directional performance at full scale.
void criterion8() {
  Database db = generate(GenConfig::paper(1));
  Warehouse wh = fresh_warehouse();
  run_etl(nullptr, db, wh, kLoad);
  for (int id = 1; id <= 5; ++id) {
    double oltp_time = 1e300, dw_time = 1e300;
    int64_t oltp_bytes = 0, dw_bytes = 0;
    // median-of-three on a sequential run, timings only
    std::vector<double> ot, dt;
    for (int rep = 0; rep < 3; ++rep) {
      auto o = run_report(id, "oltp", db, kLoad);
      auto d = run_report(id, "dw", wh.db, kLoad);
      ot.push_back(o.metrics.wall_time);
      dt.push_back(d.metrics.wall_time);
      oltp_bytes = o.metrics.bytes_scanned;
      dw_bytes = d.metrics.bytes_scanned;
    }
    std::sort(ot.begin(), ot.end());
    std::sort(dt.begin(), dt.end());
    oltp_time = ot[1];
    dw_time = dt[1];
    expect(dw_time < oltp_time, "report " + std::to_string(id) + " dw faster (" +
                                    std::to_string(dw_time) + " vs " + std::to_string(oltp_time) +
                                    ")");
    expect(dw_bytes < oltp_bytes, "report " + std::to_string(id) + " dw scans fewer bytes");
  }
}

// 9. Grade-index boundary classification.
void criterion9() {
  expect(classify_ips(2.49) == IpsCategory::K, "2.49 -> K");
  expect(classify_ips(2.50) == IpsCategory::C, "2.50 -> C");
  expect(classify_ips(3.00) == IpsCategory::C, "3.00 -> C");
  expect(classify_ips(3.01) == IpsCategory::B, "3.01 -> B");
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "capacity table golden (full preset)", criterion1},
      {2, "warehouse capacity golden (fixture)", criterion2},
      {3, "totals comparison golden", criterion3},
      {4, "per-report comparison partial golden", criterion4},
      {5, "star derivation golden", criterion5},
      {6, "cross-backend equivalence, 20 seeds", criterion6},
      {7, "constructive-merge properties", criterion7},
      {8, "directional performance at full scale", criterion8},
      {9, "grade-index boundaries", criterion9},
  };

  int failed_criteria = 0;
  for (const auto& c : criteria) {
    failures = 0;
    notes.clear();
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const std::exception& e) {
      ++failures;
      notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    if (failures == 0) {
      std::printf("[PASS] criterion %d: %s (%.2fs)\n", c.id, c.name, secs);
    } else {
      ++failed_criteria;
      std::printf("[FAIL] criterion %d: %s (%.2fs)\n", c.id, c.name, secs);
      for (const auto& n : notes) std::printf("       - %s\n", n.c_str());
    }
  }
  if (failed_criteria == 0) {
    std::printf("acceptance: all %zu criteria passed\n", std::size(criteria));
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", failed_criteria);
  return 1;
}
