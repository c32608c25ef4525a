#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>

#include "leadtime/dates.hpp"
#include "leadtime/errors.hpp"

using namespace leadtime;

TEST_CASE("civil day numbers match known anchors") {
    CHECK(days_from_civil(Date{1970, 1, 1}) == 0);
    CHECK(days_from_civil(Date{1970, 1, 2}) == 1);
    CHECK(days_from_civil(Date{1969, 12, 31}) == -1);
    CHECK(days_from_civil(Date{2000, 1, 1}) == 10957);
    CHECK(days_from_civil(Date{2020, 3, 1}) == 18322);
}

TEST_CASE("civil round-trip over a century") {
    // every day from 1950-01-01 to 2050-01-01
    const std::int64_t first = days_from_civil(Date{1950, 1, 1});
    const std::int64_t last = days_from_civil(Date{2050, 1, 1});
    for (std::int64_t n = first; n <= last; ++n) {
        const Date d = civil_from_days(n);
        REQUIRE(is_valid_date(d));
        REQUIRE(days_from_civil(d) == n);
    }
}

TEST_CASE("day differences across boundaries") {
    auto diff = [](const Date& a, const Date& b) {
        return days_from_civil(b) - days_from_civil(a);
    };
    CHECK(diff(Date{2019, 12, 31}, Date{2020, 1, 2}) == 2);
    CHECK(diff(Date{2020, 2, 28}, Date{2020, 3, 1}) == 2);  // leap year
    CHECK(diff(Date{2019, 2, 28}, Date{2019, 3, 1}) == 1);
    CHECK(diff(Date{2019, 5, 1}, Date{2019, 5, 31}) == 30);
}

TEST_CASE("date validity") {
    CHECK(is_valid_date(Date{2020, 2, 29}));
    CHECK_FALSE(is_valid_date(Date{2019, 2, 29}));
    CHECK_FALSE(is_valid_date(Date{1900, 2, 29})); // century, not a leap year
    CHECK(is_valid_date(Date{2000, 2, 29}));       // 400-year rule
    CHECK_FALSE(is_valid_date(Date{2019, 4, 31}));
    CHECK_FALSE(is_valid_date(Date{2019, 13, 1}));
    CHECK_FALSE(is_valid_date(Date{2019, 0, 10}));
    CHECK_FALSE(is_valid_date(Date{2019, 6, 0}));
}

TEST_CASE("parse_date accepts strict ISO only") {
    const Date d = parse_date("2019-05-07");
    CHECK(d == Date{2019, 5, 7});
    CHECK_THROWS_AS(parse_date("2019-5-07"), InputError);
    CHECK_THROWS_AS(parse_date("2019/05/07"), InputError);
    CHECK_THROWS_AS(parse_date("19-05-07"), InputError);
    CHECK_THROWS_AS(parse_date("2019-02-30"), InputError);
    CHECK_THROWS_AS(parse_date("2019-05-07 "), InputError);
    CHECK_THROWS_AS(parse_date(""), InputError);
    CHECK_THROWS_AS(parse_date("2019-05-0a"), InputError);
}

TEST_CASE("format_date zero-pads") {
    CHECK(format_date(Date{2019, 5, 7}) == "2019-05-07");
    CHECK(format_date(Date{987, 12, 31}) == "0987-12-31");
    CHECK(parse_date(format_date(Date{2020, 11, 3})) == Date{2020, 11, 3});
}

TEST_CASE("year-month index arithmetic") {
    const YearMonth jan{2020, 1};
    CHECK(YearMonth::from_index(jan.index()) == jan);
    CHECK(YearMonth::from_index(jan.index() - 1) == YearMonth{2019, 12});
    CHECK(YearMonth::from_index(jan.index() + 12) == YearMonth{2021, 1});
    for (int idx = 2019 * 12; idx < 2022 * 12; ++idx) {
        CHECK(YearMonth::from_index(idx).index() == idx);
    }
}

TEST_CASE("month_of truncates to the check-in month") {
    CHECK(month_of(Date{2019, 5, 31}) == YearMonth{2019, 5});
    CHECK(month_of(Date{2019, 5, 1}) == YearMonth{2019, 5});
}

TEST_CASE("parse_year_month") {
    CHECK(parse_year_month("2019-05") == YearMonth{2019, 5});
    CHECK(format_year_month(YearMonth{2019, 5}) == "2019-05");
    CHECK_THROWS_AS(parse_year_month("2019-13"), InputError);
    CHECK_THROWS_AS(parse_year_month("2019-5"), InputError);
    CHECK_THROWS_AS(parse_year_month("2019-05-01"), InputError);
    CHECK_THROWS_AS(parse_year_month("201905"), InputError);
}
