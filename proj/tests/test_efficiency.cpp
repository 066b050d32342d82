#include <cmath>

#include "doctest.h"
#include "dwkit/efficiency.hpp"
#include "dwkit/etl.hpp"
#include "dwkit/generator.hpp"

using namespace dwkit;

namespace {

// The six published parameter pairs per report, used to cross-check the
// percentage formula against every printed efficiency cell.
struct PublishedPairs {
  double oltp[5];
  double dw[5];
  double pct[5];
};

const PublishedPairs kTotalBytes = {{25185855, 30255131, 5040609, 30225131, 352023},
                                    {10046, 3742, 4774, 16752, 38481},
                                    {250605.31, 808428.35, 105484.60, 180327.00, 814.80}};
const PublishedPairs kRecords = {{43004, 117111, 74134, 117111, 3384},
                                 {295, 90, 114, 384, 303},
                                 {14477.63, 130023.33, 64929.82, 30397.66, 1016.83}};
const PublishedPairs kLengths = {{723, 791, 205, 791, 373},
                                 {69, 78, 78, 79, 127},
                                 {947.83, 914.10, 162.82, 901.27, 193.70}};
const PublishedPairs kTables = {{4, 5, 4, 5, 4}, {2, 2, 2, 2, 1}, {100, 150, 100, 150, 300}};
const PublishedPairs kTimes = {{3.13, 245.61, 439.68, 500.83, 119.15},
                               {0.01, 0.01, 0.01, 0.01, 0.01},
                               {31200.00, 2456000.00, 4396700.00, 5008200.00, 1191400.00}};
const PublishedPairs kProduced = {{279, 74, 3091, 368, 592},
                                  {279, 74, 98, 368, 303},
                                  {0.00, 0.00, 3054.08, 0.00, 95.38}};

std::map<int, QueryMetrics> published_metrics(bool dw) {
  std::map<int, QueryMetrics> m;
  for (int i = 0; i < 5; ++i) {
    QueryMetrics q;
    q.bytes_scanned = static_cast<int64_t>(dw ? kTotalBytes.dw[i] : kTotalBytes.oltp[i]);
    q.records_scanned = static_cast<int64_t>(dw ? kRecords.dw[i] : kRecords.oltp[i]);
    q.record_length_sum = static_cast<int64_t>(dw ? kLengths.dw[i] : kLengths.oltp[i]);
    q.tables_used = static_cast<int64_t>(dw ? kTables.dw[i] : kTables.oltp[i]);
    q.wall_time = dw ? kTimes.dw[i] : kTimes.oltp[i];
    q.rows_produced = static_cast<int64_t>(dw ? kProduced.dw[i] : kProduced.oltp[i]);
    m[i + 1] = q;
  }
  return m;
}

}  // namespace

TEST_CASE("efficiency_pct reproduces the reference totals comparison") {
  CHECK(std::fabs(efficiency_pct(1099, 326) - 237.12) < 0.005);
  CHECK(std::fabs(efficiency_pct(131171, 1138) - 11426.45) < 0.005);
  CHECK(std::fabs(efficiency_pct(31303511, 71555) - 43647.48) < 0.005);
  CHECK(efficiency_pct(123, 123) == 0.0);
  CHECK_THROWS_AS(efficiency_pct(10, 0), ValidationError);
}

TEST_CASE("efficiency_pct sign follows the old/new ordering") {
  CHECK(efficiency_pct(5, 10) < 0);
  CHECK(efficiency_pct(10, 5) > 0);
  CHECK(efficiency_pct(7, 7) == 0);
}

TEST_CASE("capacity report sums tables and keeps the canonical order") {
  Database fixture = build_table2_fixture();
  Warehouse wh = Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
  run_etl(nullptr, fixture, wh, Date::of(2010, 1, 10));

  CapacityReport cap = capacity_report(wh.db);
  REQUIRE(cap.rows.size() == 6);
  CHECK(cap.rows[0].table == "WPRODI");
  CHECK(cap.rows[1].table == "WJADKUL");
  CHECK(cap.totals.record_length == 326);
  CHECK(cap.totals.record_count == 1138);
  CHECK(cap.totals.total_bytes == 72115);  // column sum; the reference prints 71555

  SUBCASE("an empty database reports zero totals") {
    Database empty;
    empty.kind = "oltp";
    CapacityReport zero = capacity_report(empty);
    CHECK(zero.rows.empty());
    CHECK(zero.totals.total_bytes == 0);
  }
}

TEST_CASE("the totals comparison lands on the published percentages") {
  CapacityReport oltp;
  oltp.totals = {"Total", 1099, 131171, 31303511};
  CapacityReport dw;
  dw.totals = {"Total", 326, 1138, 71555};
  CapacityComparison cmp = compare_capacity(oltp, dw);
  CHECK(std::fabs(cmp.pct_record_length - 237.12) < 0.005);
  CHECK(std::fabs(cmp.pct_record_count - 11426.45) < 0.005);
  CHECK(std::fabs(cmp.pct_total_bytes - 43647.48) < 0.005);
}

TEST_CASE("comparison_report recomputes every published efficiency cell") {
  EfficiencyReport report = comparison_report(published_metrics(false), published_metrics(true));
  REQUIRE(report.report_ids == std::vector<int>{1, 2, 3, 4, 5});
  REQUIRE(report.blocks.size() == 6);

  const PublishedPairs* pairs[] = {&kTotalBytes, &kRecords, &kLengths,
                                   &kTables,     &kTimes,   &kProduced};
  for (int b = 0; b < 6; ++b) {
    for (int i = 0; i < 5; ++i) {
      REQUIRE(report.blocks[b].cells[i].pct.has_value());
      INFO(report.blocks[b].parameter, " report ", i + 1);
      CHECK(std::fabs(*report.blocks[b].cells[i].pct - pairs[b]->pct[i]) < 0.005);
    }
  }

  SUBCASE("the mean over the thirty cells is our own figure, not the published one") {
    double sum = 0;
    for (int b = 0; b < 6; ++b) {
      for (int i = 0; i < 5; ++i) sum += pairs[b]->pct[i];
    }
    double mean_of_printed = sum / 30.0;
    CHECK(std::fabs(report.mean_pct - mean_of_printed) < 0.01);
    CHECK(std::fabs(mean_of_printed - 489235.82) < 0.01);
    // The reference's own headline average (461801.84) is not the plain mean
    // of its printed cells; we report the recomputed value instead.
    CHECK(std::fabs(report.mean_pct - 461801.84) > 1000.0);
  }
}

TEST_CASE("identical metrics on both sides give zero efficiency") {
  EfficiencyReport report = comparison_report(published_metrics(true), published_metrics(true));
  for (const auto& block : report.blocks) {
    for (const auto& cell : block.cells) {
      REQUIRE(cell.pct.has_value());
      CHECK(*cell.pct == 0.0);
    }
  }
  CHECK(report.mean_pct == 0.0);
}

TEST_CASE("mismatched report sets are rejected") {
  auto oltp = published_metrics(false);
  auto dw = published_metrics(true);
  dw.erase(5);
  CHECK_THROWS_AS(comparison_report(oltp, dw), ValidationError);
  dw[6] = QueryMetrics{};
  CHECK_THROWS_AS(comparison_report(oltp, dw), ValidationError);
}

TEST_CASE("zero-valued warehouse cells yield undefined efficiency, not a crash") {
  auto oltp = published_metrics(false);
  auto dw = published_metrics(true);
  dw[1].rows_produced = 0;
  EfficiencyReport report = comparison_report(oltp, dw);
  CHECK_FALSE(report.blocks[5].cells[0].pct.has_value());
}

TEST_CASE("rendering is deterministic with fixed-point numbers") {
  EfficiencyReport report = comparison_report(published_metrics(false), published_metrics(true));
  std::string csv = render_efficiency(report, RenderFormat::Csv);
  CHECK(csv == render_efficiency(report, RenderFormat::Csv));
  CHECK(csv.find("250605.31") != std::string::npos);
  CHECK(csv.find(',') != std::string::npos);
  CHECK(csv.find("250.605") == std::string::npos);  // no grouping separators

  std::string md = render_efficiency(report, RenderFormat::Markdown);
  CHECK(md.find("| total_bytes ") != std::string::npos);
  CHECK(md.find("mean_efficiency_pct") != std::string::npos);

  CapacityReport cap;
  cap.backend = "oltp";
  cap.rows.push_back({"MPRODI", 48, 16, 768});
  cap.totals = {"Total", 48, 16, 768};
  std::string capmd = render_capacity(cap, RenderFormat::Markdown);
  CHECK(capmd.find("| Total ") != std::string::npos);

  CapacityReport oltp_cap;
  oltp_cap.totals = {"Total", 1099, 131171, 31303511};
  CapacityReport dw_cap;
  dw_cap.totals = {"Total", 326, 1138, 71555};
  std::string cmpmd = render_capacity_comparison(compare_capacity(oltp_cap, dw_cap),
                                                 RenderFormat::Markdown);
  CHECK(cmpmd.find("| Efficiency % | 237.12 | 11426.45 | 43647.48 |") != std::string::npos);
  CHECK_THROWS_AS(parse_render_format("yaml"), ValidationError);
}

TEST_CASE("efficiency reports round-trip through JSON") {
  EfficiencyReport report = comparison_report(published_metrics(false), published_metrics(true));
  EfficiencyReport back = efficiency_from_json(efficiency_to_json(report));
  CHECK(back == report);
}

TEST_CASE("sub-resolution wall times render with the 0.01 floor") {
  std::map<int, QueryMetrics> oltp, dw;
  QueryMetrics a;
  a.wall_time = 0.004;
  a.bytes_scanned = a.records_scanned = a.record_length_sum = a.tables_used = a.rows_produced = 1;
  QueryMetrics b = a;
  b.wall_time = 0.0001;
  oltp[1] = a;
  dw[1] = b;
  EfficiencyReport report = comparison_report(oltp, dw);
  std::string csv = render_efficiency(report, RenderFormat::Csv);
  CHECK(csv.find("wall_time_s,oltp,0.01") != std::string::npos);
  // raw precision is preserved underneath the presentation floor
  CHECK(report.blocks[4].cells[0].oltp == 0.004);
}
