// Microbenchmarks for the storage engine and the end-to-end reports.
// Run: ./build/benchmarks/dwkit_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "dwkit/etl.hpp"
#include "dwkit/generator.hpp"
#include "dwkit/reports.hpp"

using namespace dwkit;

namespace {

const Date kLoad = Date::of(2010, 1, 10);

const Database& desk_db() {
  static Database db = generate(GenConfig::desk(1));
  return db;
}

const Database& paper_db() {
  static Database db = generate(GenConfig::paper(1));
  return db;
}

const Warehouse& paper_wh() {
  static Warehouse wh = [] {
    Warehouse w = Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
    run_etl(nullptr, paper_db(), w, kLoad);
    return w;
  }();
  return wh;
}

void BM_ScanStudents(benchmark::State& state) {
  const Database& db = paper_db();
  for (auto _ : state) {
    auto r = run_metered(*scan("MMAHASISWA"), db);
    benchmark::DoNotOptimize(r.metrics.rows_produced);
  }
}
BENCHMARK(BM_ScanStudents);

void BM_HashJoinEnrollments(benchmark::State& state) {
  const Database& db = paper_db();
  for (auto _ : state) {
    auto r = run_metered(
        *hash_join(scan("TRKRS"), scan("MMAHASISWA"), {{"nim", "nim"}}), db);
    benchmark::DoNotOptimize(r.metrics.rows_produced);
  }
}
BENCHMARK(BM_HashJoinEnrollments);

void BM_GroupAggregate(benchmark::State& state) {
  const Database& db = paper_db();
  for (auto _ : state) {
    auto r = run_metered(*group_aggregate(scan("TRKRS"), {"thajar", "smt", "kdprodi"},
                                          {{"jumlah", AggOp::Count, ""}}),
                         db);
    benchmark::DoNotOptimize(r.metrics.rows_produced);
  }
}
BENCHMARK(BM_GroupAggregate);

void BM_ReportOltp(benchmark::State& state) {
  const Database& db = paper_db();
  int id = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = run_report(id, "oltp", db, kLoad);
    benchmark::DoNotOptimize(r.metrics.rows_produced);
  }
}
BENCHMARK(BM_ReportOltp)->DenseRange(1, 5);

void BM_ReportWarehouse(benchmark::State& state) {
  const Warehouse& wh = paper_wh();
  int id = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = run_report(id, "dw", wh.db, kLoad);
    benchmark::DoNotOptimize(r.metrics.rows_produced);
  }
}
BENCHMARK(BM_ReportWarehouse)->DenseRange(1, 5);

void BM_EtlFullLoad(benchmark::State& state) {
  const Database& db = desk_db();
  for (auto _ : state) {
    Warehouse wh = Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
    auto stats = run_etl(nullptr, db, wh, kLoad);
    benchmark::DoNotOptimize(stats.size());
  }
}
BENCHMARK(BM_EtlFullLoad);

void BM_DeriveWarehouse(benchmark::State& state) {
  OltpSchema oltp = build_oltp_schema();
  for (auto _ : state) {
    auto wh = derive_campus_warehouse(oltp);
    benchmark::DoNotOptimize(wh.facts.size());
  }
}
BENCHMARK(BM_DeriveWarehouse);

}  // namespace

BENCHMARK_MAIN();
