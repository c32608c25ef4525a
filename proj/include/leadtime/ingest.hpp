#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "leadtime/records.hpp"

namespace leadtime {

// Expected CSV header, exactly.
inline constexpr const char* kBookingsHeader =
    "booking_date,checkin_date,nights,city,corridor,travel_type";

struct RowError {
    int row = 0; // 1-based data row number (header not counted)
    std::string field;
    std::string message;
};

struct ParseResult {
    std::vector<BookingRecord> records; // valid rows, input order
    std::vector<RowError> errors;       // populated in lenient mode
};

enum class ParseMode { strict, lenient };

// Parses the bookings CSV. Strict mode throws InputError at the first bad
// row; lenient mode skips bad rows and reports them.
ParseResult parse_bookings(std::istream& in, ParseMode mode = ParseMode::strict);
ParseResult parse_bookings_text(const std::string& text,
                                ParseMode mode = ParseMode::strict);

struct GroupResult {
    std::vector<MonthlyCohort> cohorts; // sorted by (market, month)
    std::size_t excluded_over_cap = 0;  // records with lead time > cap
};

// Partitions records by (check-in month, market), excluding and counting
// records whose lead time exceeds lead_cap.
GroupResult group_by_month(const std::vector<BookingRecord>& records, int lead_cap);

// {"total": n, "kept": k, "excluded_over_cap": e, "errors": [...]}
std::string exclusion_report_json(std::size_t total_rows, const ParseResult& parsed,
                                  const GroupResult& grouped);

} // namespace leadtime
