#include "dwkit/hypercube.hpp"

#include <sstream>

namespace dwkit {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Inline attribute spec for derived dimensions: name:kind(width){v1,v2,...}
FieldSpec parse_inline_attr(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("derived attribute needs an inline spec: " + spec);
  FieldSpec f;
  f.name = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  auto paren = rest.find('(');
  auto close = rest.find(')');
  if (paren == std::string::npos || close == std::string::npos)
    throw ValidationError("bad inline attribute spec: " + spec);
  std::string kind = rest.substr(0, paren);
  f.width = std::stoi(rest.substr(paren + 1, close - paren - 1));
  if (kind == "text") {
    f.kind = FieldKind::Text;
  } else if (kind == "integer") {
    f.kind = FieldKind::Integer;
  } else if (kind == "enum") {
    f.kind = FieldKind::Enum;
    auto brace = rest.find('{');
    auto brace_end = rest.find('}');
    if (brace == std::string::npos || brace_end == std::string::npos)
      throw ValidationError("enum attribute needs a value set: " + spec);
    f.enum_values = split(rest.substr(brace + 1, brace_end - brace - 1), '|');
  } else {
    throw ValidationError("bad inline attribute kind: " + kind);
  }
  return f;
}

// Looks the attribute up along the dimension's table chain.
FieldSpec resolve_attr(const std::string& name, const std::vector<std::string>& chain,
                       const OltpSchema& oltp) {
  for (const auto& t : chain) {
    const TableSchema& ts = oltp.table(t);
    int idx = ts.field_index(name);
    if (idx >= 0) return ts.fields[idx];
  }
  throw ValidationError("attribute '" + name + "' not found along chain");
}

}  // namespace

HypercubeSpec hypercube_from_report(const std::string& section, const OltpSchema& oltp) {
  HypercubeSpec cube;
  std::istringstream in(section);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto toks = tokens(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == "report") {
      if (toks.size() < 2) throw ValidationError("report line needs an id");
      cube.report_id = std::stoi(toks[1]);
      auto q0 = line.find('"');
      auto q1 = line.rfind('"');
      if (q0 != std::string::npos && q1 > q0) cube.title = line.substr(q0 + 1, q1 - q0 - 1);
      if (toks.back() == "detail") cube.detail_listing = true;
    } else if (head == "source") {
      cube.source_table = toks.at(1);
      if (!oltp.has_table(cube.source_table))
        throw ValidationError("unknown source table: " + cube.source_table);
    } else if (head == "fact") {
      cube.fact_name = toks.at(1);
    } else if (head == "measure") {
      // measure NAME count | count_distinct FIELD | sum FIELD
      MeasureSpec m;
      m.name = toks.at(1);
      const std::string& op = toks.at(2);
      if (op == "count") {
        m.op = AggOp::Count;
      } else if (op == "count_distinct") {
        m.op = AggOp::CountDistinct;
        m.source_field = toks.at(3);
      } else if (op == "sum") {
        m.op = AggOp::Sum;
        m.source_field = toks.at(3);
      } else {
        throw ValidationError("unknown measure op: " + op);
      }
      cube.measures.push_back(std::move(m));
    } else if (head == "detail") {
      // detail FIELD from TABLE
      if (toks.size() < 4 || toks[2] != "from")
        throw ValidationError("detail line needs 'detail FIELD from TABLE'");
      cube.detail_fields.push_back(resolve_attr(toks[1], {toks[3]}, oltp));
    } else if (head == "dimension") {
      // dimension NAME from T1,T2 key K attrs A1,A2 cardinality N|open [display_only]
      // dimension NAME derived attrs NAME:KIND(W){...} cardinality N
      DimensionSpec dim;
      dim.name = toks.at(1);
      bool derived = false;
      bool have_cardinality = false;
      for (size_t i = 2; i < toks.size(); ++i) {
        if (toks[i] == "from") {
          dim.source_tables = split(toks.at(++i), ',');
          for (const auto& t : dim.source_tables) {
            if (!oltp.has_table(t)) throw ValidationError("unknown dimension table: " + t);
          }
        } else if (toks[i] == "derived") {
          derived = true;
        } else if (toks[i] == "key") {
          dim.key_attr = toks.at(++i);
        } else if (toks[i] == "attrs") {
          for (const auto& a : split(toks.at(++i), ',')) {
            if (derived) {
              dim.attributes.push_back(parse_inline_attr(a));
            } else {
              dim.attributes.push_back(resolve_attr(a, dim.source_tables, oltp));
            }
          }
        } else if (toks[i] == "cardinality") {
          const std::string& c = toks.at(++i);
          dim.cardinality = c == "open" ? kOpenCardinality : std::stoll(c);
          have_cardinality = true;
        } else if (toks[i] == "display_only") {
          dim.display_only = true;
        } else {
          throw ValidationError("bad dimension token: " + toks[i]);
        }
      }
      if (!have_cardinality)
        throw ValidationError("dimension '" + dim.name + "' is missing cardinality metadata");
      if (dim.attributes.empty())
        throw ValidationError("dimension '" + dim.name + "' has no attributes");
      if (dim.key_attr.empty()) dim.key_attr = dim.attributes.front().name;
      for (const auto& other : cube.dimensions) {
        if (other.name == dim.name)
          throw ValidationError("duplicate dimension '" + dim.name + "'");
      }
      cube.dimensions.push_back(std::move(dim));
    } else {
      throw ValidationError("bad report spec line: " + line);
    }
  }

  if (cube.report_id == 0) throw ValidationError("report section without a report line");
  if (cube.fact_name.empty()) throw ValidationError("report section without a fact name");
  if (cube.measures.empty() && !cube.detail_listing)
    throw ValidationError("report needs a measure or the detail flag");
  return cube;
}

std::vector<HypercubeSpec> parse_report_specs(const std::string& text, const OltpSchema& oltp) {
  std::vector<HypercubeSpec> cubes;
  std::istringstream in(text);
  std::string line, section;
  bool in_section = false;
  auto flush = [&]() {
    if (!in_section) return;
    cubes.push_back(hypercube_from_report(section, oltp));
    section.clear();
  };
  while (std::getline(in, line)) {
    if (line.rfind("report ", 0) == 0) {
      flush();
      in_section = true;
    }
    if (in_section) {
      section += line;
      section += '\n';
    }
  }
  flush();
  return cubes;
}

const std::string& campus_report_spec_text() {
  static const std::string text = R"(# Campus management reports, one section each: measures, grouping
# dimensions with their cardinality metadata, and display attributes.
report 1 "Students by degree level, study program, gender and cohort"
source MMAHASISWA
measure jumlah count
dimension prodi from MPRODI,MFAKULTAS,MJENJANG key kdprodi attrs kdprodi,nmprodi,nmfakultas,kdjenjang cardinality 16
dimension jenjang from MJENJANG key kdjenjang attrs kdjenjang cardinality 3
dimension jenis_kelamin from MMAHASISWA key jkel attrs jkel cardinality 2
dimension angkatan from MMAHASISWA key angkatan attrs angkatan cardinality open
fact WDATA1

report 2 "Active students by term, degree level, study program, gender and cohort"
source TRKRS
measure jumlah count_distinct nim
dimension tahun_ajaran from TRKRS key thajar attrs thajar cardinality open
dimension semester from TRKRS key smt attrs smt cardinality 2
dimension prodi from MPRODI,MFAKULTAS,MJENJANG key kdprodi attrs kdprodi,nmprodi,nmfakultas,kdjenjang cardinality 16
dimension jenjang from MJENJANG key kdjenjang attrs kdjenjang cardinality 3
dimension jenis_kelamin from MMAHASISWA key jkel attrs jkel cardinality 2
dimension angkatan from MMAHASISWA key angkatan attrs angkatan cardinality open
fact WAKTIF

report 3 "Semester grade-index composition by term, degree level, study program and cohort"
source TRKRS
measure jumlah count
dimension tahun_ajaran from TRKRS key thajar attrs thajar cardinality open
dimension semester from TRKRS key smt attrs smt cardinality 2
dimension prodi from MPRODI,MFAKULTAS,MJENJANG key kdprodi attrs kdprodi,nmprodi,nmfakultas,kdjenjang cardinality 16
dimension jenjang from MJENJANG key kdjenjang attrs kdjenjang cardinality 3
dimension angkatan from TRKRS key angkatan attrs angkatan cardinality open
dimension kategori derived attrs kategori:enum(1){K|C|B} cardinality 3
fact WIPS

report 4 "Grade composition by term, degree level, study program, gender and cohort"
source TRKRS
measure jumlah count
dimension tahun_ajaran from TRKRS key thajar attrs thajar cardinality open
dimension semester from TRKRS key smt attrs smt cardinality 2
dimension prodi from MPRODI,MFAKULTAS,MJENJANG key kdprodi attrs kdprodi,nmprodi,nmfakultas,kdjenjang cardinality 16
dimension jenjang from MJENJANG key kdjenjang attrs kdjenjang cardinality 3
dimension jenis_kelamin from MMAHASISWA key jkel attrs jkel cardinality 2
dimension angkatan from TRKRS key angkatan attrs angkatan cardinality open
dimension grade derived attrs grade:enum(1){A|B|C|D|E|-} cardinality 6
fact WGRADE

report 5 "Teaching assignments by term" detail
source TJADKUL
dimension tahun_ajaran from TJADKUL key thajar attrs thajar cardinality open
dimension semester from TJADKUL key smt attrs smt cardinality 2
dimension dosen from TDOSFAK key kddos attrs kddos,nmdos cardinality 386 display_only
dimension matkul from MTBMTKL key kdmk attrs kdmk,nmsingkat,sks,nmpembina cardinality 1020 display_only
detail kelompok from TJADKUL
fact WJADKUL
)";
  return text;
}

std::vector<HypercubeSpec> campus_hypercubes(const OltpSchema& oltp) {
  return parse_report_specs(campus_report_spec_text(), oltp);
}

}  // namespace dwkit
