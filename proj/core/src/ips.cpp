#include "dwkit/ips.hpp"

namespace dwkit {

bool is_graded(std::string_view grade) {
  grade = trimmed(grade);
  return grade.size() == 1 && grade[0] >= 'A' && grade[0] <= 'E';
}

int grade_points(std::string_view grade) {
  grade = trimmed(grade);
  if (grade.size() == 1) {
    switch (grade[0]) {
      case 'A': return 4;
      case 'B': return 3;
      case 'C': return 2;
      case 'D': return 1;
      case 'E': return 0;
      default: break;
    }
  }
  throw ValidationError("no grade points for '" + std::string(grade) + "'");
}

std::optional<double> compute_ips(const std::vector<GradedUnit>& rows) {
  int64_t weighted = 0;
  int64_t credits = 0;
  for (const auto& r : rows) {
    if (!is_graded(r.grade)) continue;
    weighted += static_cast<int64_t>(grade_points(r.grade)) * r.sks;
    credits += r.sks;
  }
  if (credits == 0) return std::nullopt;
  return static_cast<double>(weighted) / static_cast<double>(credits);
}

const char* ips_category_name(IpsCategory c) {
  switch (c) {
    case IpsCategory::K: return "K";
    case IpsCategory::C: return "C";
    case IpsCategory::B: return "B";
  }
  return "?";
}

IpsCategory classify_ips(double ips) {
  if (ips < 0.0 || ips > 4.0)
    throw ValidationError("grade index out of range: " + std::to_string(ips));
  if (ips < 2.5) return IpsCategory::K;
  if (ips <= 3.0) return IpsCategory::C;
  return IpsCategory::B;
}

}  // namespace dwkit
