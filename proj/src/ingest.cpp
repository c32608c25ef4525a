#include "leadtime/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "leadtime/errors.hpp"
#include "leadtime/io.hpp"

namespace leadtime {

namespace {

int parse_nights(const std::string& field) {
    int n = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), n);
    if (ec != std::errc{} || p != field.data() + field.size()) {
        throw InputError("not an integer: '" + field + "'");
    }
    return n;
}

BookingRecord parse_row(const std::vector<std::string>& fields) {
    BookingRecord r;
    try {
        r.booking_date = parse_date(fields[0]);
    } catch (const InputError& e) {
        throw InputError(std::string("booking_date: ") + e.what());
    }
    try {
        r.checkin_date = parse_date(fields[1]);
    } catch (const InputError& e) {
        throw InputError(std::string("checkin_date: ") + e.what());
    }
    try {
        r.nights = parse_nights(fields[2]);
    } catch (const InputError& e) {
        throw InputError(std::string("nights: ") + e.what());
    }
    if (r.nights < 1) {
        throw InputError("nights: must be >= 1, got " + std::to_string(r.nights));
    }
    if (r.checkin_date < r.booking_date) {
        throw InputError("checkin_date: negative lead time (check-in before booking)");
    }
    r.city = fields[3];
    if (r.city.empty()) throw InputError("city: empty");
    r.corridor = fields[4];
    if (r.corridor != "destination" && r.corridor != "origin") {
        throw InputError("corridor: unknown value '" + r.corridor + "'");
    }
    r.travel_type = fields[5];
    if (r.travel_type != "domestic" && r.travel_type != "international") {
        throw InputError("travel_type: unknown value '" + r.travel_type + "'");
    }
    return r;
}

std::string field_of(const std::string& message) {
    auto pos = message.find(':');
    return pos == std::string::npos ? std::string("row") : message.substr(0, pos);
}

} // namespace

ParseResult parse_bookings(std::istream& in, ParseMode mode) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kBookingsHeader) {
        throw InputError(std::string("bad header: expected '") + kBookingsHeader + "'");
    }

    ParseResult result;
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            std::string msg = "expected 6 fields, got " + std::to_string(fields.size());
            if (mode == ParseMode::strict) {
                throw InputError("row " + std::to_string(row) + ": " + msg);
            }
            result.errors.push_back({row, "row", msg});
            continue;
        }
        try {
            result.records.push_back(parse_row(fields));
        } catch (const InputError& e) {
            if (mode == ParseMode::strict) {
                throw InputError("row " + std::to_string(row) + ": " + e.what());
            }
            result.errors.push_back({row, field_of(e.what()), e.what()});
        }
    }
    return result;
}

ParseResult parse_bookings_text(const std::string& text, ParseMode mode) {
    std::istringstream in(text);
    return parse_bookings(in, mode);
}

GroupResult group_by_month(const std::vector<BookingRecord>& records, int lead_cap) {
    if (lead_cap < 1) throw InputError("lead_cap must be >= 1");
    GroupResult out;
    std::map<std::pair<MarketKey, YearMonth>, std::vector<BookingRecord>> groups;
    for (const auto& r : records) {
        if (r.lead_time() > lead_cap) {
            ++out.excluded_over_cap;
            continue;
        }
        groups[{r.market(), month_of(r.checkin_date)}].push_back(r);
    }
    out.cohorts.reserve(groups.size());
    for (auto& [key, bookings] : groups) {
        out.cohorts.push_back(MonthlyCohort{key.second, key.first, std::move(bookings)});
    }
    return out;
}

std::string exclusion_report_json(std::size_t total_rows, const ParseResult& parsed,
                                  const GroupResult& grouped) {
    nlohmann::ordered_json j;
    j["total"] = total_rows;
    j["kept"] = parsed.records.size() - grouped.excluded_over_cap;
    j["excluded_over_cap"] = grouped.excluded_over_cap;
    auto errors = nlohmann::ordered_json::array();
    for (const auto& e : parsed.errors) {
        errors.push_back({{"row", e.row}, {"field", e.field}, {"message", e.message}});
    }
    j["errors"] = errors;
    return j.dump(2) + "\n";
}

} // namespace leadtime
