#include "dwkit/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace dwkit {

RenderFormat parse_render_format(const std::string& name) {
  if (name == "csv") return RenderFormat::Csv;
  if (name == "json") return RenderFormat::Json;
  if (name == "markdown") return RenderFormat::Markdown;
  throw ValidationError("unknown format: " + name);
}

double efficiency_pct(double old_value, double new_value) {
  if (new_value <= 0.0)
    throw ValidationError("efficiency undefined: new value must be positive");
  return (old_value - new_value) / new_value * 100.0;
}

namespace {

// Human formats print with two fixed decimals, '.' separator, no grouping.
std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Capacity rows follow the canonical presentation order of the two built-in
// databases; anything else falls back to name order.
int table_rank(const std::string& name) {
  static const char* kOrder[] = {
      "MMAHASISWA", "MPRODI", "MFAKULTAS", "MJENJANG", "TRKRS",  "TJADKUL", "TDOSFAK",
      "MTBMTKL",    "WPRODI", "WJADKUL",   "WGRADE",   "WDATA1", "WAKTIF",  "WIPS",
  };
  for (size_t i = 0; i < std::size(kOrder); ++i) {
    if (name == kOrder[i]) return static_cast<int>(i);
  }
  return 1000;
}

}  // namespace

CapacityReport capacity_report(const Database& db) {
  CapacityReport report;
  report.backend = db.kind;
  report.totals.table = "Total";
  for (const auto& [name, table] : db.tables) {
    TableStats st = table.stats();
    report.rows.push_back({name, st.record_length, st.record_count, st.total_bytes});
    report.totals.record_length += st.record_length;
    report.totals.record_count += st.record_count;
    report.totals.total_bytes += st.total_bytes;
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const CapacityRow& a, const CapacityRow& b) {
                     int ra = table_rank(a.table), rb = table_rank(b.table);
                     return ra != rb ? ra < rb : a.table < b.table;
                   });
  return report;
}

CapacityComparison compare_capacity(const CapacityReport& oltp, const CapacityReport& dw) {
  CapacityComparison cmp;
  cmp.oltp = oltp.totals;
  cmp.oltp.table = "Total OLTP database";
  cmp.dw = dw.totals;
  cmp.dw.table = "Total data warehouse";
  cmp.pct_record_length = efficiency_pct(static_cast<double>(oltp.totals.record_length),
                                         static_cast<double>(dw.totals.record_length));
  cmp.pct_record_count = efficiency_pct(static_cast<double>(oltp.totals.record_count),
                                        static_cast<double>(dw.totals.record_count));
  cmp.pct_total_bytes = efficiency_pct(static_cast<double>(oltp.totals.total_bytes),
                                       static_cast<double>(dw.totals.total_bytes));
  return cmp;
}

bool EfficiencyReport::operator==(const EfficiencyReport& other) const {
  if (report_ids != other.report_ids || blocks.size() != other.blocks.size() ||
      mean_pct != other.mean_pct)
    return false;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].parameter != other.blocks[i].parameter) return false;
    if (blocks[i].cells.size() != other.blocks[i].cells.size()) return false;
    for (size_t j = 0; j < blocks[i].cells.size(); ++j) {
      const auto& a = blocks[i].cells[j];
      const auto& b = other.blocks[i].cells[j];
      if (a.oltp != b.oltp || a.dw != b.dw || a.pct != b.pct) return false;
    }
  }
  return true;
}

EfficiencyReport comparison_report(const std::map<int, QueryMetrics>& oltp,
                                   const std::map<int, QueryMetrics>& dw) {
  if (oltp.size() != dw.size())
    throw ValidationError("comparison needs matching report sets");
  for (const auto& [id, m] : oltp) {
    if (dw.find(id) == dw.end())
      throw ValidationError("comparison needs matching report sets");
  }

  EfficiencyReport report;
  for (const auto& [id, m] : oltp) report.report_ids.push_back(id);

  auto param_of = [](const QueryMetrics& m, int param) -> double {
    switch (param) {
      case 0: return static_cast<double>(m.bytes_scanned);
      case 1: return static_cast<double>(m.records_scanned);
      case 2: return static_cast<double>(m.record_length_sum);
      case 3: return static_cast<double>(m.tables_used);
      case 4: return m.wall_time;
      default: return static_cast<double>(m.rows_produced);
    }
  };

  double pct_sum = 0;
  int64_t pct_n = 0;
  for (int param = 0; param < 6; ++param) {
    EfficiencyReport::Block block;
    block.parameter = kEfficiencyParameters[param];
    for (int id : report.report_ids) {
      EfficiencyCell cell;
      cell.oltp = param_of(oltp.at(id), param);
      cell.dw = param_of(dw.at(id), param);
      if (cell.dw > 0) {
        cell.pct = efficiency_pct(cell.oltp, cell.dw);
        pct_sum += *cell.pct;
        ++pct_n;
      }
      block.cells.push_back(cell);
    }
    report.blocks.push_back(std::move(block));
  }
  report.mean_pct = pct_n > 0 ? pct_sum / static_cast<double>(pct_n) : 0.0;
  return report;
}

namespace {

void render_table(std::ostringstream& out, RenderFormat format,
                  const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  if (format == RenderFormat::Csv) {
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return;
  }
  // Markdown
  for (size_t i = 0; i < header.size(); ++i) out << "| " << header[i] << " ";
  out << "|\n";
  for (size_t i = 0; i < header.size(); ++i) out << "| --- ";
  out << "|\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << "| " << row[i] << " ";
    out << "|\n";
  }
}

}  // namespace

std::string render_capacity(const CapacityReport& report, RenderFormat format) {
  if (format == RenderFormat::Json) {
    nlohmann::json j;
    j["backend"] = report.backend;
    for (const auto& r : report.rows) {
      j["rows"].push_back({{"table", r.table},
                           {"record_length", r.record_length},
                           {"record_count", r.record_count},
                           {"total_bytes", r.total_bytes}});
    }
    j["totals"] = {{"record_length", report.totals.record_length},
                   {"record_count", report.totals.record_count},
                   {"total_bytes", report.totals.total_bytes}};
    return j.dump(2);
  }
  std::ostringstream out;
  std::vector<std::vector<std::string>> rows;
  auto push = [&](const CapacityRow& r) {
    rows.push_back({r.table, std::to_string(r.record_length), std::to_string(r.record_count),
                    std::to_string(r.total_bytes)});
  };
  for (const auto& r : report.rows) push(r);
  push(report.totals);
  render_table(out, format, {"table", "record_length_bytes", "record_count", "total_bytes"},
               rows);
  return out.str();
}

std::string render_capacity_comparison(const CapacityComparison& cmp, RenderFormat format) {
  if (format == RenderFormat::Json) {
    nlohmann::json j;
    auto enc = [](const CapacityRow& r) {
      return nlohmann::json{{"record_length", r.record_length},
                            {"record_count", r.record_count},
                            {"total_bytes", r.total_bytes}};
    };
    j["oltp"] = enc(cmp.oltp);
    j["dw"] = enc(cmp.dw);
    j["efficiency_pct"] = {{"record_length", cmp.pct_record_length},
                           {"record_count", cmp.pct_record_count},
                           {"total_bytes", cmp.pct_total_bytes}};
    return j.dump(2);
  }
  std::ostringstream out;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({cmp.oltp.table, std::to_string(cmp.oltp.record_length),
                  std::to_string(cmp.oltp.record_count), std::to_string(cmp.oltp.total_bytes)});
  rows.push_back({cmp.dw.table, std::to_string(cmp.dw.record_length),
                  std::to_string(cmp.dw.record_count), std::to_string(cmp.dw.total_bytes)});
  rows.push_back({"Efficiency %", fixed2(cmp.pct_record_length), fixed2(cmp.pct_record_count),
                  fixed2(cmp.pct_total_bytes)});
  render_table(out, format, {"variable", "record_length", "record_count", "total_bytes"}, rows);
  return out.str();
}

std::string render_efficiency(const EfficiencyReport& report, RenderFormat format) {
  if (format == RenderFormat::Json) return efficiency_to_json(report);

  std::ostringstream out;
  std::vector<std::string> header = {"parameter", "side"};
  for (int id : report.report_ids) header.push_back("report_" + std::to_string(id));
  std::vector<std::vector<std::string>> rows;
  for (const auto& block : report.blocks) {
    bool is_time = block.parameter == std::string("wall_time_s");
    // Sub-resolution timings surface as 0.01 in the rendered table only.
    auto show = [&](double v) { return fixed2(is_time ? std::max(v, 0.01) : v); };
    std::vector<std::string> oltp_row = {block.parameter, "oltp"};
    std::vector<std::string> dw_row = {"", "dw"};
    std::vector<std::string> pct_row = {"", "efficiency_pct"};
    for (const auto& cell : block.cells) {
      oltp_row.push_back(show(cell.oltp));
      dw_row.push_back(show(cell.dw));
      pct_row.push_back(cell.pct ? fixed2(*cell.pct) : "undefined");
    }
    rows.push_back(std::move(oltp_row));
    rows.push_back(std::move(dw_row));
    rows.push_back(std::move(pct_row));
  }
  rows.push_back({"mean_efficiency_pct", "", fixed2(report.mean_pct)});
  render_table(out, format, header, rows);
  return out.str();
}

std::string efficiency_to_json(const EfficiencyReport& report) {
  nlohmann::json j;
  j["report_ids"] = report.report_ids;
  for (const auto& block : report.blocks) {
    nlohmann::json jb;
    jb["parameter"] = block.parameter;
    for (const auto& cell : block.cells) {
      nlohmann::json jc = {{"oltp", cell.oltp}, {"dw", cell.dw}};
      if (cell.pct) jc["pct"] = *cell.pct;
      jb["cells"].push_back(std::move(jc));
    }
    j["blocks"].push_back(std::move(jb));
  }
  j["mean_pct"] = report.mean_pct;
  return j.dump(2);
}

EfficiencyReport efficiency_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EfficiencyReport report;
  report.report_ids = j.at("report_ids").get<std::vector<int>>();
  for (const auto& jb : j.at("blocks")) {
    EfficiencyReport::Block block;
    block.parameter = jb.at("parameter").get<std::string>();
    for (const auto& jc : jb.at("cells")) {
      EfficiencyCell cell;
      cell.oltp = jc.at("oltp").get<double>();
      cell.dw = jc.at("dw").get<double>();
      if (jc.contains("pct")) cell.pct = jc.at("pct").get<double>();
      block.cells.push_back(cell);
    }
    report.blocks.push_back(std::move(block));
  }
  report.mean_pct = j.at("mean_pct").get<double>();
  return report;
}

}  // namespace dwkit
