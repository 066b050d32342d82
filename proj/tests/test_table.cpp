#include <random>

#include "doctest.h"
#include "dwkit/campus_schema.hpp"
#include "dwkit/table.hpp"

using namespace dwkit;

namespace {

TableSchema small_schema() {
  return define_table("T",
                      {text_field("id", 12), text_field("name", 40), int_field("a", 8),
                       int_field("b", 8)},
                      {"id"});
}

}  // namespace

TEST_CASE("define_table sums field widths into the record length") {
  TableSchema s = small_schema();
  CHECK(s.record_length == 68);
  CHECK(s.field_index("name") == 1);
}

TEST_CASE("define_table rejects degenerate inputs") {
  CHECK_THROWS_AS(define_table("T", {}, {}), ValidationError);
  CHECK_THROWS_AS(define_table("T", {text_field("x", 4), text_field("x", 4)}, {}),
                  ValidationError);
  CHECK_THROWS_AS(define_table("T", {text_field("x", 0)}, {}), ValidationError);
  CHECK_THROWS_AS(define_table("T", {text_field("x", 4)}, {"nope"}), ValidationError);
  CHECK_THROWS_AS(define_table("T", {enum_field("e", 1, {})}, {}), ValidationError);
}

TEST_CASE("campus student table lands on its fixed record length") {
  OltpSchema oltp = build_oltp_schema();
  CHECK(oltp.table("MMAHASISWA").record_length == 586);
}

TEST_CASE("insert updates capacity and validates values") {
  Table t(small_schema());
  CHECK(t.stats().record_count == 0);
  CHECK(t.stats().total_bytes == 0);

  t.insert({std::string("k1"), std::string("row one"), int64_t(1), int64_t(2)});
  CHECK(t.stats().record_count == 1);
  CHECK(t.stats().total_bytes == 68);

  SUBCASE("text is padded to the declared width") {
    CHECK(std::get<std::string>(t.rows()[0][0]).size() == 12);
  }
  SUBCASE("duplicate primary key is rejected on master tables") {
    CHECK_THROWS_AS(t.insert({std::string("k1"), std::string("again"), int64_t(0), int64_t(0)}),
                    ValidationError);
  }
  SUBCASE("schema mismatch is rejected") {
    CHECK_THROWS_AS(t.insert({std::string("k2")}), ValidationError);
    CHECK_THROWS_AS(t.insert({std::string("k2"), std::string(), int64_t(1), std::string("x")}),
                    ValidationError);
  }
  SUBCASE("over-wide values are rejected") {
    CHECK_THROWS_AS(
        t.insert({std::string("way-too-long-for-twelve"), std::string(), int64_t(1), int64_t(1)}),
        ValidationError);
    CHECK_THROWS_AS(
        t.insert({std::string("k2"), std::string(), int64_t(123456789), int64_t(1)}),
        ValidationError);
  }
}

TEST_CASE("enum fields enforce their closed domain") {
  Table t(define_table("G", {text_field("id", 4), enum_field("jkel", 1, {"P", "W"})}, {"id"}));
  t.insert({std::string("a"), std::string("P")});
  CHECK_THROWS_AS(t.insert({std::string("b"), std::string("X")}), ValidationError);
}

TEST_CASE("total_bytes stays record_length * record_count through mutations") {
  Table t(define_table("F", {text_field("k", 6), int_field("v", 8)}, {"k"}));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    t.insert({"k" + std::to_string(i), static_cast<int64_t>(rng() % 1000)});
    TableStats st = t.stats();
    CHECK(st.total_bytes == st.record_length * st.record_count);
  }
}

TEST_CASE("history tables allow recurring keys when uniqueness is off") {
  Table t(Table(define_table("H", {text_field("k", 6), int_field("v", 8)}, {"k"}),
                /*enforce_unique_pk=*/false));
  t.insert({std::string("k"), int64_t(1)});
  t.insert({std::string("k"), int64_t(2)});
  CHECK(t.row_count() == 2);
}

TEST_CASE("update_field rewrites in place with validation") {
  Table t(define_table("U", {text_field("k", 6), int_field("v", 8)}, {"k"}));
  t.insert({std::string("k"), int64_t(1)});
  t.update_field(0, 1, Value(int64_t(9)));
  CHECK(std::get<int64_t>(t.rows()[0][1]) == 9);
  CHECK_THROWS_AS(t.update_field(0, 1, Value(std::string("no"))), ValidationError);
  CHECK_THROWS_AS(t.update_field(5, 1, Value(int64_t(1))), ValidationError);
}

TEST_CASE("empty table stats") {
  Table t(small_schema());
  TableStats st = t.stats();
  CHECK(st.record_length == 68);
  CHECK(st.record_count == 0);
  CHECK(st.total_bytes == 0);
}
