// dwkit: star-schema warehouse toolkit for the campus reporting workload.
//
// Subcommands: gen (synthetic OLTP snapshots), etl (constructive-merge load),
// report (one report on either backend), capacity (per-table sizes), bench
// (full pipeline with the four comparison tables), derive (star-schema
// derivation document).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dwkit/efficiency.hpp"
#include "dwkit/etl.hpp"
#include "dwkit/generator.hpp"
#include "dwkit/reports.hpp"
#include "dwkit/snapshot.hpp"

using namespace dwkit;

namespace {

Date today() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  return Date::of(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + out_path);
  f << text;
}

Database generate_scale(const std::string& scale, uint64_t seed, const GenConfig& overrides,
                        bool stray_overrides) {
  if (scale == "custom") {
    GenConfig c = overrides;
    c.seed = seed;
    return generate(c);
  }
  if (stray_overrides) throw ValidationError("count flags only apply to --scale custom");
  if (scale == "paper") return generate(GenConfig::paper(seed));
  if (scale == "desk") return generate(GenConfig::desk(seed));
  if (scale == "table2") return build_table2_fixture();
  throw ValidationError("unknown scale: " + scale);
}

Database load_backend_db(const std::string& db_path, const std::string& wh_dir,
                         const std::string& backend) {
  if (backend == "oltp") {
    if (db_path.empty()) throw ValidationError("--backend oltp needs --db SNAPSHOT");
    return load_snapshot(db_path);
  }
  if (backend == "dw") {
    if (wh_dir.empty()) throw ValidationError("--backend dw needs --warehouse DIR");
    return std::move(load_warehouse(wh_dir).db);
  }
  throw ValidationError("unknown backend: " + backend);
}

struct BenchTables {
  CapacityReport oltp_capacity;
  CapacityReport dw_capacity;
  CapacityComparison totals;
  EfficiencyReport efficiency;
};

BenchTables run_bench(const Database& db, Date load_date, int repeats) {
  Warehouse wh = Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
  run_etl(nullptr, db, wh, load_date);

  std::map<int, QueryMetrics> oltp_metrics, dw_metrics;
  for (int id = 1; id <= 5; ++id) {
    std::vector<double> ot, dt;
    QueryMetrics om{}, dm{};
    for (int rep = 0; rep < repeats; ++rep) {
      auto o = run_report(id, "oltp", db, load_date);
      auto d = run_report(id, "dw", wh.db, load_date);
      ot.push_back(o.metrics.wall_time);
      dt.push_back(d.metrics.wall_time);
      om = o.metrics;
      dm = d.metrics;
    }
    std::sort(ot.begin(), ot.end());
    std::sort(dt.begin(), dt.end());
    om.wall_time = ot[ot.size() / 2];
    dm.wall_time = dt[dt.size() / 2];
    oltp_metrics[id] = om;
    dw_metrics[id] = dm;
  }

  BenchTables t;
  t.oltp_capacity = capacity_report(db);
  t.dw_capacity = capacity_report(wh.db);
  t.totals = compare_capacity(t.oltp_capacity, t.dw_capacity);
  t.efficiency = comparison_report(oltp_metrics, dw_metrics);
  return t;
}

std::string render_bench(const BenchTables& t, RenderFormat format) {
  if (format == RenderFormat::Json) {
    return "{\n\"oltp_capacity\": " + render_capacity(t.oltp_capacity, format) +
           ",\n\"dw_capacity\": " + render_capacity(t.dw_capacity, format) +
           ",\n\"totals\": " + render_capacity_comparison(t.totals, format) +
           ",\n\"efficiency\": " + render_efficiency(t.efficiency, format) + "\n}\n";
  }
  std::string s;
  auto section = [&](const std::string& title, const std::string& body) {
    if (format == RenderFormat::Markdown)
      s += "## " + title + "\n\n" + body + "\n";
    else
      s += "# " + title + "\n" + body + "\n";
  };
  section("Transactional database capacity", render_capacity(t.oltp_capacity, format));
  section("Warehouse capacity", render_capacity(t.dw_capacity, format));
  section("Capacity totals comparison", render_capacity_comparison(t.totals, format));
  section("Per-report efficiency", render_efficiency(t.efficiency, format));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwkit: OLTP-to-star-schema warehouse toolkit with metered reports"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  std::string scale = "desk";
  std::string out_path, old_path, new_path, wh_dir, db_path;
  std::string load_date_str, as_of_str;
  std::string etl_format = "text", rep_format = "csv", cap_format = "markdown",
              bench_format = "markdown";
  GenConfig overrides = GenConfig::desk(1);
  int report_id = 1, repeats = 3, threshold = 8;
  std::string backend = "oltp", reports_path;

  auto add_count_flags = [&overrides](CLI::App* cmd) {
    cmd->add_option("--students", overrides.students, "custom scale: student count");
    cmd->add_option("--prodi", overrides.prodi, "custom scale: study program count");
    cmd->add_option("--fakultas", overrides.fakultas, "custom scale: faculty count");
    cmd->add_option("--krs", overrides.krs, "custom scale: enrollment count");
    cmd->add_option("--jadkul", overrides.jadkul, "custom scale: schedule entry count");
    cmd->add_option("--dosen", overrides.dosen, "custom scale: lecturer count");
    cmd->add_option("--matkul", overrides.matkul, "custom scale: course count");
    cmd->add_option("--year-min", overrides.year_min, "custom scale: first cohort year");
    cmd->add_option("--year-max", overrides.year_max, "custom scale: last cohort year");
  };
  auto have_count_flags = [](CLI::App* cmd) {
    for (const char* name : {"--students", "--prodi", "--fakultas", "--krs", "--jadkul",
                             "--dosen", "--matkul", "--year-min", "--year-max"}) {
      if (cmd->count(name) > 0) return true;
    }
    return false;
  };

  auto* gen = app.add_subcommand("gen", "Generate a synthetic OLTP snapshot");
  gen->add_option("--seed", seed, "Generation seed")->capture_default_str();
  gen->add_option("--scale", scale, "paper | desk | table2 | custom")->capture_default_str();
  gen->add_option("--out", out_path, "Snapshot file path")->required();
  add_count_flags(gen);

  auto* etl = app.add_subcommand("etl", "Load a snapshot into the warehouse");
  etl->add_option("--old", old_path, "Previous snapshot (enables the diff-driven load)");
  etl->add_option("--new", new_path, "Snapshot to load")->required();
  etl->add_option("--warehouse", wh_dir, "Warehouse directory")->required();
  etl->add_option("--load-date", load_date_str, "Load date, YYYYMMDD (default: today)");
  etl->add_option("--format", etl_format, "text | json")->capture_default_str();
  etl->add_option("--out", out_path, "Write the load report here instead of stdout");

  auto* rep = app.add_subcommand("report", "Run one management report");
  rep->add_option("--id", report_id, "Report id, 1..5")->required();
  rep->add_option("--backend", backend, "oltp | dw")->capture_default_str();
  rep->add_option("--db", db_path, "OLTP snapshot (backend oltp)");
  rep->add_option("--warehouse", wh_dir, "Warehouse directory (backend dw)");
  rep->add_option("--as-of", as_of_str, "Validity date for warehouse reads, YYYYMMDD");
  rep->add_option("--format", rep_format, "csv | json")->capture_default_str();
  rep->add_option("--out", out_path, "Output path (default stdout)");

  auto* cap = app.add_subcommand("capacity", "Per-table record length, count and bytes");
  cap->add_option("--db", db_path, "OLTP snapshot");
  cap->add_option("--warehouse", wh_dir, "Warehouse directory");
  cap->add_option("--format", cap_format, "csv | json | markdown")->capture_default_str();
  cap->add_option("--out", out_path, "Output path (default stdout)");

  auto* bench = app.add_subcommand(
      "bench", "Generate, load and compare both backends across all five reports");
  bench->add_option("--seed", seed, "Generation seed")->capture_default_str();
  bench->add_option("--scale", scale, "paper | desk | table2 | custom")->capture_default_str();
  bench->add_option("--repeats", repeats, "Timing repeats, median taken")->capture_default_str();
  bench->add_option("--load-date", load_date_str, "Load date, YYYYMMDD (default: today)");
  bench->add_option("--format", bench_format, "csv | json | markdown")->capture_default_str();
  bench->add_option("--out", out_path, "Output path (default stdout)");
  add_count_flags(bench);

  auto* der = app.add_subcommand("derive", "Derive the warehouse model from report specs");
  der->add_option("--reports", reports_path,
                  "Report spec document (default: the built-in campus reports)");
  der->add_option("--threshold", threshold, "Inline cardinality threshold")
      ->capture_default_str();
  der->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);

    if (*gen) {
      Database db =
          generate_scale(scale, seed, overrides, scale != "custom" && have_count_flags(gen));
      save_snapshot(db, out_path);
      std::cerr << "wrote " << out_path << " (" << db.table("MMAHASISWA").row_count()
                << " students, " << db.table("TRKRS").row_count() << " enrollments)\n";
    } else if (*etl) {
      Date load_date = load_date_str.empty() ? today() : Date::parse(load_date_str);
      std::string warn;
      Database next = load_snapshot(new_path, &warn);
      Warehouse wh = std::filesystem::exists(std::filesystem::path(wh_dir) / "warehouse.meta")
                         ? load_warehouse(wh_dir)
                         : Warehouse::create(derive_campus_warehouse(build_oltp_schema()));
      std::map<std::string, LoadStats> stats;
      if (old_path.empty()) {
        stats = run_etl(nullptr, next, wh, load_date);
      } else {
        Database prev = load_snapshot(old_path, &warn);
        stats = run_etl(&prev, next, wh, load_date);
      }
      if (!warn.empty()) std::cerr << "warning: " << warn << "\n";
      save_warehouse(wh, wh_dir);
      emit(etl_format == "json" ? load_report_json(stats) : load_report_text(stats), out_path);
    } else if (*rep) {
      Date as_of = as_of_str.empty() ? today() : Date::parse(as_of_str);
      Database db = load_backend_db(db_path, wh_dir, backend);
      ReportResult r = run_report(report_id, backend, db, as_of);
      if (rep_format == "json") {
        emit(report_json(r), out_path);
      } else if (rep_format == "csv") {
        emit(report_csv(r), out_path);
      } else {
        throw ValidationError("unknown format: " + rep_format);
      }
    } else if (*cap) {
      if (db_path.empty() == wh_dir.empty())
        throw ValidationError("capacity needs exactly one of --db or --warehouse");
      Database db =
          db_path.empty() ? std::move(load_warehouse(wh_dir).db) : load_snapshot(db_path);
      emit(render_capacity(capacity_report(db), parse_render_format(cap_format)), out_path);
    } else if (*bench) {
      if (repeats < 1) throw ValidationError("--repeats must be at least 1");
      Date load_date = load_date_str.empty() ? today() : Date::parse(load_date_str);
      Database db =
          generate_scale(scale, seed, overrides, scale != "custom" && have_count_flags(bench));
      emit(render_bench(run_bench(db, load_date, repeats), parse_render_format(bench_format)),
           out_path);
    } else if (*der) {
      OltpSchema oltp = build_oltp_schema();
      std::vector<HypercubeSpec> cubes;
      if (reports_path.empty()) {
        cubes = campus_hypercubes(oltp);
      } else {
        std::ifstream f(reports_path);
        if (!f) throw ValidationError("cannot read " + reports_path);
        std::ostringstream buf;
        buf << f.rdbuf();
        cubes = parse_report_specs(buf.str(), oltp);
      }
      std::vector<StarSchema> stars;
      stars.reserve(cubes.size());
      for (const auto& c : cubes) stars.push_back(eliminate_dimensions(c, oltp, threshold));
      emit(describe(derive_warehouse(stars)), out_path);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
