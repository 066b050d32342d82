#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dwkit {

// Bad user input or contract violation at an API boundary. Tools map this to
// exit code 2; any other exception is an internal error (exit 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FieldKind { Text, Integer, Decimal, Date, Enum };

const char* field_kind_name(FieldKind kind);

// Calendar date packed as yyyymmdd (20091231). Effective-dated warehouse rows
// use 9999-12-31 as the open end date; renderers show an open date as blank.
struct Date {
  int32_t ymd = 0;

  static constexpr int32_t kOpen = 99991231;

  static Date open() { return Date{kOpen}; }
  static Date of(int year, int month, int day) {
    return Date{year * 10000 + month * 100 + day};
  }
  static Date parse(std::string_view s);

  bool is_open() const { return ymd == kOpen; }
  std::string str() const;  // fixed "YYYYMMDD"

  auto operator<=>(const Date&) const = default;
};

using Value = std::variant<std::string, int64_t, double, Date>;

// Trailing spaces are padding, never data.
std::string_view trimmed(std::string_view s);

bool holds_text(const Value& v);
const std::string& text_of(const Value& v);
int64_t int_of(const Value& v);
double numeric_of(const Value& v);  // Integer or Decimal
Date date_of(const Value& v);

// Kind-aware three-way comparison; text compares on the trimmed value.
int compare_values(const Value& a, const Value& b);
bool values_equal(const Value& a, const Value& b);

// Canonical encoding used for hash keys and grouping.
std::string value_key(const Value& v);

// Lexicographic ordering over value tuples (group keys, business keys).
struct ValueVecLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      int c = compare_values(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

// Rendering: trimmed text, plain integers, dates as YYYYMMDD (open -> "").
std::string value_str(const Value& v);

}  // namespace dwkit
