#include "dwkit/generator.hpp"

#include <cstdio>
#include <random>
#include <unordered_set>

#include "dwkit/ips.hpp"

namespace dwkit {

namespace {

// Bounded draws go through rejection sampling instead of
// std::uniform_int_distribution so snapshots stay identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  int64_t below(int64_t n) {
    uint64_t bound = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<int64_t>(v % bound);
  }

  int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

std::string zpad(int64_t v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*lld", digits, static_cast<long long>(v));
  return buf;
}

std::string kdfak_code(int i) { return zpad(i + 1, 2); }
std::string kdprodi_code(int i) { return "P" + zpad(i + 1, 4); }
std::string kddos_code(int i) { return "D" + zpad(i + 1, 4); }
std::string kdmk_code(int i) { return "MK" + zpad(i + 1, 6); }
std::string nim_code(int angkatan, int serial) { return std::to_string(angkatan) + zpad(serial, 6); }

struct StudentCell {
  int prodi_idx;
  int gender_idx;  // 0 = P, 1 = W
  int angkatan;
};

// Nine cohort cells are held back from student generation so the populated
// (prodi, gender, angkatan) space of the full preset has exactly 279 cells
// (16 * 2 * 9 = 288 minus these). The fixture uses the same layout.
bool cell_excluded(int prodi_idx, int gender_idx, int angkatan, int year_min) {
  return prodi_idx <= 8 && gender_idx == 1 && angkatan == year_min + prodi_idx;
}

void insert_masters(Database& db, Rng& rng, int n_fakultas, int n_prodi, int n_dosen,
                    int n_matkul, bool fixed_sks) {
  Table& jenjang = db.table("MJENJANG");
  for (const auto& j : kJenjangRows) jenjang.insert({std::string(j.kode), std::string(j.nama), ""});

  Table& fak = db.table("MFAKULTAS");
  for (int i = 0; i < n_fakultas; ++i) fak.insert({kdfak_code(i), "FAK-" + zpad(i + 1, 2), ""});

  Table& prodi = db.table("MPRODI");
  for (int i = 0; i < n_prodi; ++i) {
    // Round-robin faculty, mostly strata satu with diploma 3 every fourth.
    std::string kdjenjang = (i % 4 == 3) ? "30" : "50";
    prodi.insert({kdprodi_code(i), "PRD-" + zpad(i + 1, 2), kdfak_code(i % n_fakultas), kdjenjang, ""});
  }

  Table& dosen = db.table("TDOSFAK");
  for (int i = 0; i < n_dosen; ++i)
    dosen.insert({kddos_code(i), "Dosen " + zpad(i + 1, 4), kdfak_code(i % n_fakultas), ""});

  Table& matkul = db.table("MTBMTKL");
  for (int i = 0; i < n_matkul; ++i) {
    int64_t sks = fixed_sks ? 2 : 1 + rng.below(3);
    matkul.insert({kdmk_code(i), "Mata Kuliah " + zpad(i + 1, 6), "MK-" + zpad(i + 1, 6), sks,
                   "Dosen " + zpad(i % n_dosen + 1, 4), ""});
  }
}

}  // namespace

GenConfig GenConfig::paper(uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  c.students = 42977;
  c.prodi = 16;
  c.fakultas = 7;
  c.krs = 84774;
  c.jadkul = 1988;
  c.dosen = 386;
  c.matkul = 1020;
  c.year_min = 2001;
  c.year_max = 2009;
  c.paper_scale = true;
  return c;
}

GenConfig GenConfig::desk(uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  c.students = 200;
  c.prodi = 6;
  c.fakultas = 3;
  c.krs = 800;
  c.jadkul = 60;
  c.dosen = 25;
  c.matkul = 40;
  c.year_min = 2007;
  c.year_max = 2009;
  return c;
}

void GenConfig::validate() const {
  if (students < 0 || prodi < 0 || fakultas < 0 || krs < 0 || jadkul < 0 || dosen < 0 || matkul < 0)
    throw ValidationError("generation counts must be >= 0");
  if (year_min > year_max) throw ValidationError("year range is empty");
  if (students > 0 && prodi == 0) throw ValidationError("students need at least one study program");
  if (prodi > 0 && fakultas == 0) throw ValidationError("study programs need at least one faculty");
  if (krs > 0 && (students == 0 || matkul == 0))
    throw ValidationError("enrollments need students and courses");
  if (jadkul > 0 && (matkul == 0 || dosen == 0))
    throw ValidationError("schedule entries need courses and lecturers");
  if (matkul > 0 && dosen == 0) throw ValidationError("courses need a supervising lecturer");
  int semesters = (year_max - year_min + 1) * 2;
  if (krs > 0 && static_cast<int64_t>(students) * matkul * semesters < krs)
    throw ValidationError("krs count exceeds the distinct enrollment space");
  if (jadkul > 0 && static_cast<int64_t>(matkul) * semesters * 6 < jadkul)
    throw ValidationError("jadkul count exceeds the distinct schedule space");
  if (paper_scale) {
    int cells = prodi * 2 * (year_max - year_min + 1);
    if (students < cells) throw ValidationError("paper scale needs students >= cohort cells");
  }
}

uint64_t GenConfig::hash() const {
  // FNV-1a over the canonical description.
  uint64_t h = 1469598103934665603ull;
  for (char c : describe()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string GenConfig::describe() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "seed=%llu students=%d prodi=%d fakultas=%d krs=%d jadkul=%d dosen=%d matkul=%d "
                "years=%d-%d paper=%d",
                static_cast<unsigned long long>(seed), students, prodi, fakultas, krs, jadkul,
                dosen, matkul, year_min, year_max, paper_scale ? 1 : 0);
  return buf;
}

Database generate(const GenConfig& config) {
  config.validate();
  Rng rng(config.seed);
  OltpSchema schema = build_oltp_schema();
  Database db = make_oltp_database(schema);
  db.config_hash = config.hash();

  insert_masters(db, rng, config.fakultas, config.prodi, config.dosen, config.matkul,
                 /*fixed_sks=*/false);

  // Student cohort cells. Under the full preset every allowed cell is seeded
  // once before random placement so the populated cell count is exact.
  std::vector<StudentCell> allowed;
  for (int p = 0; p < config.prodi; ++p) {
    for (int g = 0; g < 2; ++g) {
      for (int y = config.year_min; y <= config.year_max; ++y) {
        if (config.paper_scale && cell_excluded(p, g, y, config.year_min)) continue;
        allowed.push_back({p, g, y});
      }
    }
  }

  Table& mhs = db.table("MMAHASISWA");
  struct StudentRef {
    std::string nim;
    std::string kdprodi;
    int angkatan;
  };
  std::vector<StudentRef> students;
  students.reserve(config.students);
  for (int i = 0; i < config.students; ++i) {
    StudentCell cell = config.paper_scale && i < static_cast<int>(allowed.size())
                           ? allowed[i]
                           : allowed[rng.below(static_cast<int64_t>(allowed.size()))];
    std::string nim = nim_code(cell.angkatan, i + 1);
    std::string kdprodi = kdprodi_code(cell.prodi_idx);
    mhs.insert({nim, "Mahasiswa " + zpad(i + 1, 6), std::string(kGenders[cell.gender_idx]),
                static_cast<int64_t>(cell.angkatan), kdprodi, ""});
    students.push_back({std::move(nim), std::move(kdprodi), cell.angkatan});
  }

  // Enrollments: unique (nim, thajar, smt, kdmk), grades uniform over the
  // six letters, term between the student's admission year and the last year.
  Table& krs = db.table("TRKRS");
  const Table& matkul = db.table("MTBMTKL");
  std::unordered_set<std::string> krs_seen;
  krs_seen.reserve(config.krs * 2);
  std::vector<std::string> grades(std::begin(kGrades), std::end(kGrades));
  int made = 0;
  while (made < config.krs) {
    const StudentRef& s = students[rng.below(config.students)];
    int thajar = rng.range(s.angkatan, config.year_max);
    const char* smt = kSemesters[rng.below(2)];
    int course = static_cast<int>(rng.below(config.matkul));
    std::string key = s.nim + "|" + std::to_string(thajar) + "|" + smt + "|" + kdmk_code(course);
    if (!krs_seen.insert(key).second) continue;
    const Row& course_row = matkul.rows()[course];
    krs.insert({s.nim, static_cast<int64_t>(thajar), std::string(smt), kdmk_code(course),
                grades[rng.below(6)], course_row[3], s.kdprodi, static_cast<int64_t>(s.angkatan),
                ""});
    ++made;
  }

  // Teaching schedule: unique (thajar, smt, kdmk, kelompok).
  Table& jadkul = db.table("TJADKUL");
  std::unordered_set<std::string> jad_seen;
  static const char* kKelompok[] = {"A", "B", "C", "D", "E", "F"};
  made = 0;
  while (made < config.jadkul) {
    int thajar = rng.range(config.year_min, config.year_max);
    const char* smt = kSemesters[rng.below(2)];
    int course = static_cast<int>(rng.below(config.matkul));
    const char* kel = kKelompok[rng.below(6)];
    std::string key = std::to_string(thajar) + "|" + smt + "|" + kdmk_code(course) + "|" + kel;
    if (!jad_seen.insert(key).second) continue;
    jadkul.insert({static_cast<int64_t>(thajar), std::string(smt), kdmk_code(course),
                   std::string(kel), kddos_code(static_cast<int>(rng.below(config.dosen))), ""});
    ++made;
  }

  return db;
}

Database build_table2_fixture() {
  OltpSchema schema = build_oltp_schema();
  Database db = make_oltp_database(schema);
  GenConfig tag;
  tag.seed = 0;
  db.config_hash = tag.hash() ^ 0x7ab1e2;

  Rng rng(0);  // masters only; the rest is fully determined
  const int n_prodi = 16, n_fakultas = 7, n_dosen = 40, n_matkul = 101;
  const int year_min = 2001, year_max = 2009;
  insert_masters(db, rng, n_fakultas, n_prodi, n_dosen, n_matkul, /*fixed_sks=*/true);

  Table& mhs = db.table("MMAHASISWA");
  Table& krs = db.table("TRKRS");
  const int64_t thajar = 2009;
  const std::string smt = "Gasal";

  int serial = 0;
  auto add_student = [&](int p, int g, int y) {
    ++serial;
    std::string nim = nim_code(y, serial);
    mhs.insert({nim, "Mahasiswa " + zpad(serial, 6), std::string(kGenders[g]),
                static_cast<int64_t>(y), kdprodi_code(p), ""});
    return nim;
  };
  auto enroll = [&](const std::string& nim, int p, int y, int course, const char* grade) {
    krs.insert({nim, thajar, smt, kdmk_code(course), std::string(grade), int64_t(2),
                kdprodi_code(p), static_cast<int64_t>(y), ""});
  };

  // 37 active (prodi, angkatan) pairs, both genders enrolled. Per pair:
  //  - pairs 0..23: grades {A..E} in both gender cells, index categories
  //    {K, C, B} (straight-A pull to B, all-B pull to C, mixed run to K);
  //  - pairs 24..35: grades {A..E}, categories {K, B};
  //  - pair 36: grades {A..D}, categories {C, B}.
  // That lands on 74 activity cells, 368 grade cells and 98 category cells.
  static const char* kFive[] = {"A", "B", "C", "D", "E"};
  std::vector<std::pair<int, int>> active;
  for (int p = 0; p < n_prodi && static_cast<int>(active.size()) < 37; ++p) {
    for (int y = year_min; y <= year_max && static_cast<int>(active.size()) < 37; ++y) {
      if (cell_excluded(p, 1, y, year_min)) continue;  // needs both genders
      active.emplace_back(p, y);
    }
  }

  std::vector<std::vector<bool>> populated(
      n_prodi, std::vector<bool>(2 * (year_max - year_min + 1), false));
  auto mark = [&](int p, int g, int y) { populated[p][g * 9 + (y - year_min)] = true; };

  for (size_t j = 0; j < active.size(); ++j) {
    auto [p, y] = active[j];
    mark(p, 0, y);
    mark(p, 1, y);
    if (j < 36) {
      std::string run_p = add_student(p, 0, y);
      for (int c = 0; c < 5; ++c) enroll(run_p, p, y, c, kFive[c]);
      std::string run_w = add_student(p, 1, y);
      for (int c = 0; c < 5; ++c) enroll(run_w, p, y, c, kFive[c]);
      if (j < 24) {
        std::string mid = add_student(p, 0, y);
        enroll(mid, p, y, 0, "B");
        enroll(mid, p, y, 1, "B");
        std::string top = add_student(p, 1, y);
        enroll(top, p, y, 0, "A");
        enroll(top, p, y, 1, "A");
      } else {
        std::string top = add_student(p, 0, y);
        enroll(top, p, y, 0, "A");
        enroll(top, p, y, 1, "A");
      }
    } else {
      std::string run_p = add_student(p, 0, y);
      for (int c = 0; c < 4; ++c) enroll(run_p, p, y, c, kFive[c]);
      std::string run_w = add_student(p, 1, y);
      for (int c = 0; c < 4; ++c) enroll(run_w, p, y, c, kFive[c]);
      std::string top = add_student(p, 0, y);
      enroll(top, p, y, 0, "A");
      enroll(top, p, y, 1, "A");
    }
  }

  // One passive student in every remaining allowed cohort cell: 279 populated
  // cells in total, 205 of them without any enrollment.
  for (int p = 0; p < n_prodi; ++p) {
    for (int g = 0; g < 2; ++g) {
      for (int y = year_min; y <= year_max; ++y) {
        if (cell_excluded(p, g, y, year_min)) continue;
        if (populated[p][g * 9 + (y - year_min)]) continue;
        add_student(p, g, y);
      }
    }
  }

  // 101 courses x 3 groups = 303 schedule entries in the loaded term.
  Table& jadkul = db.table("TJADKUL");
  static const char* kGroups[] = {"A", "B", "C"};
  for (int c = 0; c < n_matkul; ++c) {
    for (int g = 0; g < 3; ++g) {
      jadkul.insert({thajar, smt, kdmk_code(c), std::string(kGroups[g]),
                     kddos_code((c * 3 + g) % n_dosen), ""});
    }
  }

  return db;
}

}  // namespace dwkit
