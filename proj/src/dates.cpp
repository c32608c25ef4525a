#include "leadtime/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "leadtime/errors.hpp"

namespace leadtime {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

int parse_int_field(const std::string& text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw InputError("malformed date: '" + text + "'");
    }
    return value;
}

} // namespace

YearMonth YearMonth::from_index(int idx) {
    YearMonth ym;
    ym.year = idx / 12;
    ym.month = idx % 12 + 1;
    if (ym.month <= 0) { // negative index
        ym.year -= 1;
        ym.month += 12;
    }
    return ym;
}

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    return true;
}

std::int64_t days_from_civil(const Date& d) {
    // Howard Hinnant's civil-days algorithm.
    std::int64_t y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned day = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t days) {
    // Inverse of days_from_civil (Hinnant).
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw InputError("malformed date: '" + text + "' (expected YYYY-MM-DD)");
    }
    Date d;
    d.year = parse_int_field(text, 0, 4);
    d.month = parse_int_field(text, 5, 2);
    d.day = parse_int_field(text, 8, 2);
    if (!is_valid_date(d)) {
        throw InputError("invalid calendar date: '" + text + "'");
    }
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

YearMonth month_of(const Date& d) {
    return YearMonth{d.year, d.month};
}

YearMonth parse_year_month(const std::string& text) {
    if (text.size() != 7 || text[4] != '-') {
        throw InputError("malformed month: '" + text + "' (expected YYYY-MM)");
    }
    YearMonth ym;
    ym.year = parse_int_field(text, 0, 4);
    ym.month = parse_int_field(text, 5, 2);
    if (ym.month < 1 || ym.month > 12) {
        throw InputError("invalid month: '" + text + "'");
    }
    return ym;
}

std::string format_year_month(const YearMonth& ym) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", ym.year, ym.month);
    return buf;
}

} // namespace leadtime
