#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace leadtime {

// Timezone-free calendar date. Lead times are whole-day differences of
// these; no timestamps appear anywhere in the pipeline.
struct Date {
    int year = 0;
    int month = 0; // 1..12
    int day = 0;   // 1..31

    auto operator<=>(const Date&) const = default;
};

// Year-month cohort key.
struct YearMonth {
    int year = 0;
    int month = 0; // 1..12

    auto operator<=>(const YearMonth&) const = default;

    // Months since year 0, for gap detection and lag arithmetic.
    int index() const { return year * 12 + (month - 1); }
    static YearMonth from_index(int idx);
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(const Date& d);

Date civil_from_days(std::int64_t days);

// Parses strict ISO-8601 YYYY-MM-DD. Throws InputError on malformed input.
Date parse_date(const std::string& text);

std::string format_date(const Date& d);

YearMonth month_of(const Date& d);

// Parses YYYY-MM. Throws InputError on malformed input.
YearMonth parse_year_month(const std::string& text);

std::string format_year_month(const YearMonth& ym);

} // namespace leadtime
