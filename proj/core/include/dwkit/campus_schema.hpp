#pragma once

#include <string>
#include <vector>

#include "dwkit/table.hpp"

namespace dwkit {

inline constexpr const char* kGenders[] = {"P", "W"};
inline constexpr const char* kSemesters[] = {"Gasal", "Genap"};

struct ForeignKey {
  std::string table;
  std::string field;
  std::string ref_table;
};

// The campus transaction schema: four master tables (students, study
// programs, faculties, degree levels) and four operational tables (course
// enrollments with grades, teaching schedule, lecturers, course master).
struct OltpSchema {
  std::vector<TableSchema> tables;
  std::vector<ForeignKey> foreign_keys;

  bool has_table(const std::string& name) const;
  const TableSchema& table(const std::string& name) const;
};

// Record lengths are fixed: MMAHASISWA 586, MPRODI 48, MFAKULTAS 65,
// MJENJANG 24, TRKRS 68, TJADKUL 88, TDOSFAK 73, MTBMTKL 147 (total 1099).
// Each table carries the semantically required fields plus one explicit
// padding field that absorbs the rest of the declared record length.
OltpSchema build_oltp_schema();

// Creates an empty database with all eight tables.
Database make_oltp_database(const OltpSchema& schema);

// Degree level rows: kode 50 strata satu, 30 diploma 3, 20 reserved.
struct JenjangRow {
  const char* kode;
  const char* nama;
};
inline constexpr JenjangRow kJenjangRows[] = {
    {"50", "strata satu"},
    {"30", "diploma 3"},
    {"20", "diploma 2"},
};

}  // namespace dwkit
