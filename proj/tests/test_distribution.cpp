#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "leadtime/distribution.hpp"
#include "leadtime/errors.hpp"
#include "leadtime/rng.hpp"

using namespace leadtime;

namespace {

BookingRecord make_booking(int lead, int nights) {
    BookingRecord r;
    r.checkin_date = Date{2019, 5, 15};
    r.booking_date = civil_from_days(days_from_civil(r.checkin_date) - lead);
    r.nights = nights;
    r.city = "A";
    r.corridor = "destination";
    r.travel_type = "domestic";
    return r;
}

MonthlyCohort make_cohort(const std::vector<std::pair<int, int>>& lead_nights) {
    MonthlyCohort c;
    c.month = YearMonth{2019, 5};
    c.market = MarketKey{"A", "destination", "domestic"};
    for (const auto& [lead, nights] : lead_nights) {
        c.bookings.push_back(make_booking(lead, nights));
    }
    return c;
}

MonthlyCohort random_cohort(SplitMix64& rng, int cap, int max_bookings) {
    const int n = 1 + static_cast<int>(rng.next_unit() * max_bookings);
    std::vector<std::pair<int, int>> ln;
    for (int i = 0; i < n; ++i) {
        ln.emplace_back(static_cast<int>(rng.next_unit() * (cap + 1)),
                        1 + static_cast<int>(rng.next_unit() * 5));
    }
    return make_cohort(ln);
}

// Expands bookings into one entry per night; the reference for every
// nights-weighted statistic.
std::vector<int> night_multiset(const MonthlyCohort& cohort) {
    std::vector<int> nights;
    for (const auto& b : cohort.bookings) {
        for (int k = 0; k < b.nights; ++k) nights.push_back(b.lead_time());
    }
    std::sort(nights.begin(), nights.end());
    return nights;
}

} // namespace

TEST_CASE("mass is nights divided by total nights") {
    // leads 2,2,5 with nights 3,1,6
    const auto dist = build_distribution(make_cohort({{2, 3}, {2, 1}, {5, 6}}), 10);
    CHECK(dist.total_nights == 10);
    CHECK(dist.mass.size() == 11);
    CHECK(dist.mass[2] == doctest::Approx(0.4));
    CHECK(dist.mass[5] == doctest::Approx(0.6));
    CHECK(dist.mass[0] == 0);
    CHECK(is_normalized(dist.mass));
}

TEST_CASE("two five-night bookings at one lead collapse to a point mass") {
    const auto dist = build_distribution(make_cohort({{3, 5}, {3, 5}}), 10);
    CHECK(dist.mass[3] == doctest::Approx(1.0));
    const auto s = describe(dist);
    CHECK(s.mean == doctest::Approx(3));
    CHECK(s.median == 3);
    CHECK(s.sd == doctest::Approx(0));
}

TEST_CASE("normalization holds on random cohorts") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto dist = build_distribution(random_cohort(rng, 40, 60), 40);
        double total = 0;
        for (double m : dist.mass) total += m;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("booking order does not change the distribution") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        auto cohort = random_cohort(rng, 30, 40);
        const auto before = build_distribution(cohort, 30);
        // deterministic shuffle via seeded draws
        for (std::size_t i = cohort.bookings.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.next_unit() * i);
            std::swap(cohort.bookings[i - 1], cohort.bookings[j]);
        }
        const auto after = build_distribution(cohort, 30);
        CHECK(before.mass == after.mass);
    }
}

TEST_CASE("scaling every booking's nights leaves the mass unchanged") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto cohort = random_cohort(rng, 30, 40);
        const auto before = build_distribution(cohort, 30);
        for (auto& b : cohort.bookings) b.nights *= 7;
        const auto after = build_distribution(cohort, 30);
        REQUIRE(before.mass.size() == after.mass.size());
        for (std::size_t i = 0; i < before.mass.size(); ++i) {
            CHECK(after.mass[i] == doctest::Approx(before.mass[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("weighted stats match the expanded night multiset") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cohort = random_cohort(rng, 25, 20); // <= 100 nights
        const auto nights = night_multiset(cohort);
        if (nights.size() > 100) continue;
        const auto s = describe(build_distribution(cohort, 25));

        double mean = 0;
        for (int v : nights) mean += v;
        mean /= static_cast<double>(nights.size());
        double var = 0;
        for (int v : nights) var += (v - mean) * (v - mean);
        var /= static_cast<double>(nights.size()); // population form
        const auto median_pos = (nights.size() + 1) / 2; // smallest i >= n/2
        const double median = nights[median_pos - 1];

        CHECK(s.mean == doctest::Approx(mean).epsilon(1e-9));
        CHECK(s.sd == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
        CHECK(s.median == median);
    }
}

TEST_CASE("per-trip and nights-weighted stats differ by construction") {
    // one long stay at a short lead dominates the nights weighting
    const auto cohort = make_cohort({{1, 9}, {11, 1}});
    const auto weighted = describe(build_distribution(cohort, 20));
    const auto per_trip = describe_per_trip(cohort);
    CHECK(weighted.mean == doctest::Approx(2.0));
    CHECK(per_trip.mean == doctest::Approx(6.0));
    CHECK(weighted.median == 1);
    CHECK(per_trip.median == doctest::Approx(6.0));
}

TEST_CASE("empty cohort and over-cap leads are rejected") {
    CHECK_THROWS_AS(build_distribution(make_cohort({}), 10), ComputeError);
    CHECK_THROWS_AS(build_distribution(make_cohort({{11, 2}}), 10), InputError);
}

TEST_CASE("cumulative mass is an inclusive prefix sum ending at 1") {
    const auto dist = build_distribution(make_cohort({{0, 1}, {2, 1}, {4, 2}}), 4);
    const auto c = cumulative_mass(dist.mass);
    REQUIRE(c.size() == dist.mass.size());
    CHECK(c[0] == doctest::Approx(0.25));
    CHECK(c[1] == doctest::Approx(0.25));
    CHECK(c[2] == doctest::Approx(0.5));
    CHECK(c[4] == doctest::Approx(1.0));
    CHECK(pickup_curve(dist) == c);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] >= c[i - 1]);
}

TEST_CASE("window positions convert between both narrations") {
    // "17 of 30 elapsed" is "13 days before check-in"
    CHECK(elapsed_from_days_before(13, 30) == 17);
    CHECK(days_before_from_elapsed(17, 30) == 13);
    for (int e = 0; e <= 30; ++e) {
        CHECK(elapsed_from_days_before(days_before_from_elapsed(e, 30), 30) == e);
    }
}
