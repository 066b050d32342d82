#include "dwkit/value.hpp"

#include <cstdio>

namespace dwkit {

const char* field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::Text: return "text";
    case FieldKind::Integer: return "integer";
    case FieldKind::Decimal: return "decimal";
    case FieldKind::Date: return "date";
    case FieldKind::Enum: return "enum";
  }
  return "?";
}

Date Date::parse(std::string_view s) {
  s = trimmed(s);
  if (s.empty()) return Date::open();
  if (s.size() != 8) throw ValidationError("bad date literal: '" + std::string(s) + "'");
  int32_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ValidationError("bad date literal: '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
  }
  return Date{v};
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08d", ymd);
  return buf;
}

std::string_view trimmed(std::string_view s) {
  size_t end = s.size();
  while (end > 0 && s[end - 1] == ' ') --end;
  return s.substr(0, end);
}

bool holds_text(const Value& v) { return std::holds_alternative<std::string>(v); }

const std::string& text_of(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ValidationError("value is not text");
}

int64_t int_of(const Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v)) return *i;
  throw ValidationError("value is not an integer");
}

double numeric_of(const Value& v) {
  if (const auto* i = std::get_if<int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ValidationError("value is not numeric");
}

Date date_of(const Value& v) {
  if (const auto* d = std::get_if<Date>(&v)) return *d;
  throw ValidationError("value is not a date");
}

int compare_values(const Value& a, const Value& b) {
  if (a.index() != b.index()) {
    // Mixed integer/decimal comparisons come up in derived columns.
    if ((a.index() == 1 || a.index() == 2) && (b.index() == 1 || b.index() == 2)) {
      double x = numeric_of(a), y = numeric_of(b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    return a.index() < b.index() ? -1 : 1;
  }
  switch (a.index()) {
    case 0: {
      auto x = trimmed(std::get<std::string>(a));
      auto y = trimmed(std::get<std::string>(b));
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case 1: {
      auto x = std::get<int64_t>(a), y = std::get<int64_t>(b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case 2: {
      auto x = std::get<double>(a), y = std::get<double>(b);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    default: {
      auto x = std::get<Date>(a).ymd, y = std::get<Date>(b).ymd;
      return x < y ? -1 : (x > y ? 1 : 0);
    }
  }
}

bool values_equal(const Value& a, const Value& b) { return compare_values(a, b) == 0; }

std::string value_key(const Value& v) {
  switch (v.index()) {
    case 0: return std::string(trimmed(std::get<std::string>(v)));
    case 1: return std::to_string(std::get<int64_t>(v));
    case 2: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v));
      return buf;
    }
    default: return std::get<Date>(v).str();
  }
}

std::string value_str(const Value& v) {
  switch (v.index()) {
    case 0: return std::string(trimmed(std::get<std::string>(v)));
    case 1: return std::to_string(std::get<int64_t>(v));
    case 2: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", std::get<double>(v));
      return buf;
    }
    default: {
      Date d = std::get<Date>(v);
      return d.is_open() ? std::string() : d.str();
    }
  }
}

}  // namespace dwkit
