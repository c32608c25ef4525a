#pragma once

#include <compare>
#include <string>
#include <vector>

#include "leadtime/dates.hpp"

namespace leadtime {

// Market dimensions: a (city, corridor, travel_type) cell.
struct MarketKey {
    std::string city;
    std::string corridor;    // "destination" | "origin"
    std::string travel_type; // "domestic" | "international"

    auto operator<=>(const MarketKey&) const = default;

    std::string label() const {
        return city + "/" + corridor + "/" + travel_type;
    }
};

// One realized stay. `nights` is the stay length that weights the booking's
// contribution to the lead-time mass.
struct BookingRecord {
    Date booking_date;
    Date checkin_date;
    int nights = 0;
    std::string city;
    std::string corridor;
    std::string travel_type;

    int lead_time() const {
        return static_cast<int>(days_from_civil(checkin_date) -
                                days_from_civil(booking_date));
    }

    MarketKey market() const { return MarketKey{city, corridor, travel_type}; }
};

// All bookings checking in during one month for one market.
struct MonthlyCohort {
    YearMonth month;
    MarketKey market;
    std::vector<BookingRecord> bookings;
};

} // namespace leadtime
