#include "dwkit/campus_schema.hpp"

#include "dwkit/ips.hpp"

namespace dwkit {

bool OltpSchema::has_table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return true;
  }
  return false;
}

const TableSchema& OltpSchema::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw ValidationError("no such OLTP table: " + name);
}

OltpSchema build_oltp_schema() {
  OltpSchema s;
  std::vector<std::string> genders(std::begin(kGenders), std::end(kGenders));
  std::vector<std::string> semesters(std::begin(kSemesters), std::end(kSemesters));
  std::vector<std::string> grades(std::begin(kGrades), std::end(kGrades));

  s.tables.push_back(define_table("MMAHASISWA",
                                  {
                                      text_field("nim", 10),
                                      text_field("nama", 40),
                                      enum_field("jkel", 1, genders),
                                      int_field("angkatan", 4),
                                      text_field("kdprodi", 5),
                                      text_field("padding", 526),
                                  },
                                  {"nim"}));

  s.tables.push_back(define_table("MPRODI",
                                  {
                                      text_field("kdprodi", 5),
                                      text_field("nmprodi", 6),
                                      text_field("kdfak", 2),
                                      text_field("kdjenjang", 2),
                                      text_field("padding", 33),
                                  },
                                  {"kdprodi"}));

  s.tables.push_back(define_table("MFAKULTAS",
                                  {
                                      text_field("kdfak", 2),
                                      text_field("nmfakultas", 6),
                                      text_field("padding", 57),
                                  },
                                  {"kdfak"}));

  s.tables.push_back(define_table("MJENJANG",
                                  {
                                      text_field("kdjenjang", 2),
                                      text_field("nmjenjang", 11),
                                      text_field("padding", 11),
                                  },
                                  {"kdjenjang"}));

  // Per-student per-semester course enrollment with the awarded grade.
  // kdprodi and angkatan are denormalized from the student record so the
  // grade-index report can run off this table and the program chain alone.
  s.tables.push_back(define_table("TRKRS",
                                  {
                                      text_field("nim", 10),
                                      int_field("thajar", 4),
                                      enum_field("smt", 5, semesters),
                                      text_field("kdmk", 8),
                                      enum_field("grade", 1, grades),
                                      int_field("sks", 1),
                                      text_field("kdprodi", 5),
                                      int_field("angkatan", 4),
                                      text_field("padding", 30),
                                  },
                                  {"nim", "thajar", "smt", "kdmk"}));

  s.tables.push_back(define_table("TJADKUL",
                                  {
                                      int_field("thajar", 4),
                                      enum_field("smt", 5, semesters),
                                      text_field("kdmk", 8),
                                      text_field("kelompok", 3),
                                      text_field("kddos", 5),
                                      text_field("padding", 63),
                                  },
                                  {"thajar", "smt", "kdmk", "kelompok"}));

  s.tables.push_back(define_table("TDOSFAK",
                                  {
                                      text_field("kddos", 5),
                                      text_field("nmdos", 30),
                                      text_field("kdfak", 2),
                                      text_field("padding", 36),
                                  },
                                  {"kddos"}));

  s.tables.push_back(define_table("MTBMTKL",
                                  {
                                      text_field("kdmk", 8),
                                      text_field("nmmk", 40),
                                      text_field("nmsingkat", 20),
                                      int_field("sks", 1),
                                      text_field("nmpembina", 35),
                                      text_field("padding", 43),
                                  },
                                  {"kdmk"}));

  s.foreign_keys = {
      {"MMAHASISWA", "kdprodi", "MPRODI"}, {"MPRODI", "kdfak", "MFAKULTAS"},
      {"MPRODI", "kdjenjang", "MJENJANG"}, {"TRKRS", "nim", "MMAHASISWA"},
      {"TRKRS", "kdmk", "MTBMTKL"},        {"TRKRS", "kdprodi", "MPRODI"},
      {"TJADKUL", "kdmk", "MTBMTKL"},      {"TJADKUL", "kddos", "TDOSFAK"},
      {"TDOSFAK", "kdfak", "MFAKULTAS"},
  };
  return s;
}

Database make_oltp_database(const OltpSchema& schema) {
  Database db;
  db.kind = "oltp";
  for (const auto& t : schema.tables) db.tables.emplace(t.name, Table(t));
  return db;
}

}  // namespace dwkit
