#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwkit/value.hpp"

namespace dwkit {

// Letter grades are A..E plus "-" for students who did not sit the exam.
// "-" rows never enter the grade index, neither numerator nor denominator.
inline constexpr const char* kGrades[] = {"A", "B", "C", "D", "E", "-"};

bool is_graded(std::string_view grade);

// 4-point scale: A=4, B=3, C=2, D=1, E=0. Throws for "-" and anything else.
int grade_points(std::string_view grade);

struct GradedUnit {
  std::string grade;
  int sks = 0;  // credit units weighting the average
};

// Credit-weighted semester grade index over one student-semester's rows:
// sum(points * sks) / sum(sks) across graded rows. Empty after exclusion
// means the index is undefined and nullopt is returned.
std::optional<double> compute_ips(const std::vector<GradedUnit>& rows);

enum class IpsCategory { K, C, B };

const char* ips_category_name(IpsCategory c);

// K below 2.5, C from 2.5 through 3.0 inclusive, B above 3.0.
// Input must lie in [0, 4].
IpsCategory classify_ips(double ips);

}  // namespace dwkit
