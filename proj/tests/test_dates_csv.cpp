#include <doctest.h>

#include "fxtails/csv.hpp"
#include "fxtails/dates.hpp"
#include "fxtails/errors.hpp"
#include "helpers.hpp"

using namespace fxtails;

TEST_CASE("date serial matches the civil calendar") {
    CHECK(Date{1970, 1, 1}.serial() == 0);
    CHECK(Date{1969, 12, 31}.serial() == -1);
    CHECK(Date{2000, 3, 1}.serial() == 11017);
    CHECK(Date{1995, 10, 23}.serial() == 9426);
    CHECK(Date{2012, 4, 30}.serial() == 15460);
    CHECK(Date{2004, 2, 29}.serial() == 12477);
}

TEST_CASE("serial round trip over a wide range") {
    for (std::int64_t s = -1000; s <= 20000; s += 37) {
        const Date d = Date::from_serial(s);
        CHECK(d.serial() == s);
    }
}

TEST_CASE("plus_days walks the calendar") {
    const Date start{1995, 10, 23};
    CHECK(start.plus_days(6034) == Date{2012, 4, 30});
    CHECK(start.plus_days(0) == start);
    CHECK(start.plus_days(-1) == Date{1995, 10, 22});
}

TEST_CASE("date parsing is strict ISO") {
    CHECK(Date::parse("1999-01-01") == Date{1999, 1, 1});
    CHECK(Date::parse("2000-02-29") == Date{2000, 2, 29});
    CHECK_THROWS_AS(Date::parse("1900-02-29"), ParseError);  // not a leap year
    CHECK_THROWS_AS(Date::parse("2023-02-29"), ParseError);
    CHECK_THROWS_AS(Date::parse("2023-13-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2023-00-10"), ParseError);
    CHECK_THROWS_AS(Date::parse("2023-04-31"), ParseError);
    CHECK_THROWS_AS(Date::parse("23-04-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2023/04/01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2023-4-01"), ParseError);
    CHECK_THROWS_AS(Date::parse(""), ParseError);
}

TEST_CASE("date ordering and formatting") {
    CHECK(Date{1999, 12, 31} < Date{2000, 1, 1});
    CHECK(Date{2000, 1, 2}.to_string() == "2000-01-02");
}

TEST_CASE("csv split trims cells") {
    const auto cells = split_csv_line(" a , b ,c,, d ");
    REQUIRE(cells.size() == 5);
    CHECK(cells[0] == "a");
    CHECK(cells[1] == "b");
    CHECK(cells[2] == "c");
    CHECK(cells[3] == "");
    CHECK(cells[4] == "d");
}

TEST_CASE("csv reader skips blank lines and keeps line numbers") {
    const auto path = test::write_file("basic.csv", "a,b\n\n1,2\n\n3,4\n");
    const auto rows = read_csv(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].line_number == 1);
    CHECK(rows[1].line_number == 3);
    CHECK(rows[2].line_number == 5);
    CHECK(rows[2].cells == std::vector<std::string>{"3", "4"});
}

TEST_CASE("csv reader rejects quotes and missing files") {
    const auto path = test::write_file("quoted.csv", "a,b\n\"x\",2\n");
    CHECK_THROWS_AS(read_csv(path), ParseError);
    CHECK_THROWS_AS(read_csv("/nonexistent/really.csv"), IoError);
}

TEST_CASE("double cells parse strictly") {
    CHECK(parse_double_cell("1.5", 1, 1) == 1.5);
    CHECK(parse_double_cell("-2e3", 1, 1) == -2000.0);
    CHECK_THROWS_AS(parse_double_cell("abc", 4, 2), ParseError);
    CHECK_THROWS_AS(parse_double_cell("1.5x", 4, 2), ParseError);
    CHECK_THROWS_AS(parse_double_cell("", 4, 2), ParseError);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 3.141592653589793, 1e-300, 6035.0,
                     0.21576155433883565}) {
        CHECK(parse_double_cell(format_double(v), 1, 1) == v);
    }
}
