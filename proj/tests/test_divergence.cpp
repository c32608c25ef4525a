#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "leadtime/distribution.hpp"
#include "leadtime/divergence.hpp"
#include "leadtime/errors.hpp"
#include "leadtime/rng.hpp"

using namespace leadtime;

namespace {

const MarketKey kMarket{"A", "destination", "domestic"};

std::vector<double> random_simplex(SplitMix64& rng, std::size_t bins) {
    std::vector<double> v(bins);
    double total = 0;
    for (auto& x : v) {
        x = -std::log(rng.next_unit_positive());
        total += x;
    }
    for (auto& x : v) x /= total;
    return v;
}

LeadTimeDistribution dist_of(YearMonth month, std::vector<double> mass,
                             double nights = 100) {
    LeadTimeDistribution d;
    d.month = month;
    d.market = kMarket;
    d.mass = std::move(mass);
    d.total_nights = nights;
    return d;
}

MonthlyCohort cohort_of(YearMonth month,
                        const std::vector<std::pair<int, int>>& lead_nights) {
    MonthlyCohort c;
    c.month = month;
    c.market = kMarket;
    for (const auto& [lead, nights] : lead_nights) {
        BookingRecord r;
        r.checkin_date = Date{month.year, month.month, 10};
        r.booking_date = civil_from_days(days_from_civil(r.checkin_date) - lead);
        r.nights = nights;
        r.city = kMarket.city;
        r.corridor = kMarket.corridor;
        r.travel_type = kMarket.travel_type;
        c.bookings.push_back(r);
    }
    return c;
}

DivergenceSeries series_of(const std::vector<std::pair<YearMonth, double>>& pts) {
    DivergenceSeries s;
    s.market = kMarket;
    for (const auto& [m, v] : pts) s.points.push_back({m, v});
    return s;
}

} // namespace

TEST_CASE("l1 distance on a worked pair") {
    CHECK(l1_distance({0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}) == doctest::Approx(0.3));
    CHECK(l1_distance({1, 0}, {0, 1}) == doctest::Approx(1.0)); // disjoint
    CHECK(l1_distance({0.5, 0.5}, {0.5, 0.5}) == 0);
}

TEST_CASE("l1 metric properties on random simplex pairs") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto bins = 2 + static_cast<std::size_t>(rng.next_unit() * 30);
        const auto p = random_simplex(rng, bins);
        const auto q = random_simplex(rng, bins);
        const auto r = random_simplex(rng, bins);
        const double pq = l1_distance(p, q);

        CHECK(pq == l1_distance(q, p)); // symmetric, exactly
        CHECK(pq >= 0);
        CHECK(pq <= 1.0 + 1e-12);
        CHECK(pq <= l1_distance(p, r) + l1_distance(r, q) + 1e-12);
        CHECK(l1_distance(p, p) == 0);

        // half the absolute sum equals the positive-part sum
        double positive = 0;
        for (std::size_t i = 0; i < bins; ++i) {
            positive += std::max(p[i] - q[i], 0.0);
        }
        CHECK(pq == doctest::Approx(positive).epsilon(1e-12));
    }
}

TEST_CASE("nearly-identical vectors are near zero") {
    SplitMix64 rng(102);
    auto p = random_simplex(rng, 10);
    CHECK(l1_distance(p, p) < 1e-12);
}

TEST_CASE("l1 rejects malformed input") {
    CHECK_THROWS_AS(l1_distance({0.5, 0.5}, {0.3, 0.3, 0.4}), InputError);
    CHECK_THROWS_AS(l1_distance({0.6, 0.6}, {0.5, 0.5}), InputError);
    CHECK_THROWS_AS(l1_distance({0.5, 0.5}, {0.7, 0.2}), InputError);
}

TEST_CASE("yoy series compares to the same month a year earlier") {
    std::map<YearMonth, LeadTimeDistribution> dists;
    dists.emplace(YearMonth{2019, 5}, dist_of({2019, 5}, {0.5, 0.3, 0.2}));
    dists.emplace(YearMonth{2020, 5}, dist_of({2020, 5}, {0.2, 0.3, 0.5}));
    dists.emplace(YearMonth{2020, 6}, dist_of({2020, 6}, {0.2, 0.3, 0.5}));

    const auto series = yoy_series(dists);
    CHECK(series.mode == DivergenceMode::yoy);
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].month == YearMonth{2020, 5});
    CHECK(series.points[0].value == doctest::Approx(0.3));
    // 2019-05 and 2020-06 lack counterparts
    REQUIRE(series.gaps.size() == 2);
    CHECK(series.gaps[0] == YearMonth{2019, 5});
    CHECK(series.gaps[1] == YearMonth{2020, 6});
}

TEST_CASE("identical years produce an all-zero yoy series") {
    std::map<YearMonth, LeadTimeDistribution> dists;
    for (int month = 1; month <= 12; ++month) {
        dists.emplace(YearMonth{2019, month},
                      dist_of({2019, month}, {0.4, 0.6}));
        dists.emplace(YearMonth{2020, month},
                      dist_of({2020, month}, {0.4, 0.6}));
    }
    const auto series = yoy_series(dists);
    REQUIRE(series.points.size() == 12);
    for (const auto& p : series.points) CHECK(p.value == 0);
}

TEST_CASE("baseline series skips the baseline year itself") {
    std::map<YearMonth, LeadTimeDistribution> dists;
    dists.emplace(YearMonth{2019, 5}, dist_of({2019, 5}, {0.5, 0.5}));
    dists.emplace(YearMonth{2020, 5}, dist_of({2020, 5}, {0.4, 0.6}));
    dists.emplace(YearMonth{2021, 5}, dist_of({2021, 5}, {0.3, 0.7}));

    const auto series = baseline_series(dists, 2019);
    CHECK(series.mode == DivergenceMode::baseline);
    CHECK(series.baseline_year == 2019);
    REQUIRE(series.points.size() == 2);
    CHECK(series.points[0].month == YearMonth{2020, 5});
    CHECK(series.points[0].value == doctest::Approx(0.1));
    CHECK(series.points[1].month == YearMonth{2021, 5});
    CHECK(series.points[1].value == doctest::Approx(0.2));

    CHECK_THROWS_AS(baseline_series(dists, 2017), ComputeError);
}

TEST_CASE("insufficient history is an error, not an empty file") {
    std::map<YearMonth, LeadTimeDistribution> dists;
    dists.emplace(YearMonth{2019, 5}, dist_of({2019, 5}, {0.5, 0.5}));
    CHECK_THROWS_AS(yoy_series(dists), ComputeError);
}

TEST_CASE("partial distribution truncates and renormalizes") {
    // nights 5,3,2 at leads 0,1,2 plus mass beyond the horizon
    const auto cohort = cohort_of({2020, 5}, {{0, 5}, {1, 3}, {2, 2}, {9, 10}});
    const auto partial = build_partial(cohort, 2);
    CHECK(partial.horizon == 2);
    REQUIRE(partial.mass.size() == 3);
    CHECK(partial.mass[0] == doctest::Approx(0.5));
    CHECK(partial.mass[1] == doctest::Approx(0.3));
    CHECK(partial.mass[2] == doctest::Approx(0.2));
    CHECK(partial.observed_nights == 10);

    const auto historical = build_partial(
        cohort_of({2019, 5}, {{0, 2}, {1, 3}, {2, 5}}), 2);
    CHECK(partial_l1(partial, historical) == doctest::Approx(0.3));
}

TEST_CASE("partial from a full distribution matches the cohort build") {
    const auto cohort = cohort_of({2020, 5}, {{0, 4}, {2, 6}, {7, 10}});
    const auto direct = build_partial(cohort, 3);
    const auto via_dist =
        partial_from_distribution(build_distribution(cohort, 10), 3);
    CHECK(via_dist.horizon == direct.horizon);
    REQUIRE(via_dist.mass.size() == direct.mass.size());
    for (std::size_t i = 0; i < direct.mass.size(); ++i) {
        CHECK(via_dist.mass[i] == doctest::Approx(direct.mass[i]).epsilon(1e-12));
    }
    CHECK(via_dist.observed_nights == doctest::Approx(direct.observed_nights));
}

TEST_CASE("no nights inside the horizon is an error") {
    const auto cohort = cohort_of({2020, 5}, {{9, 10}});
    CHECK_THROWS_AS(build_partial(cohort, 3), ComputeError);
}

TEST_CASE("historical reference averages prior partials") {
    PartialDistribution a{1, {0.8, 0.2}, 10};
    PartialDistribution b{1, {0.4, 0.6}, 10};
    const auto ref = historical_partial_reference({a, b});
    CHECK(ref.mass[0] == doctest::Approx(0.6));
    CHECK(ref.mass[1] == doctest::Approx(0.4));
    CHECK_THROWS_AS(historical_partial_reference({}), InputError);
}

TEST_CASE("partial series compares against prior same-month history") {
    std::map<YearMonth, LeadTimeDistribution> dists;
    dists.emplace(YearMonth{2019, 5}, dist_of({2019, 5}, {0.5, 0.3, 0.2}));
    dists.emplace(YearMonth{2020, 5}, dist_of({2020, 5}, {0.2, 0.3, 0.5}));
    const auto series = partial_series(dists, 2);
    CHECK(series.mode == DivergenceMode::partial);
    CHECK(series.horizon == 2);
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].month == YearMonth{2020, 5});
    CHECK(series.points[0].value == doctest::Approx(0.3));
    CHECK(mode_name(series.mode, series.horizon) == "partial2");
}

TEST_CASE("early warning flags months above the threshold") {
    const auto series = series_of({{{2020, 1}, 0.05},
                                   {{2020, 2}, 0.15},
                                   {{2020, 3}, 0.10},
                                   {{2020, 4}, 0.35}});
    const auto flags = early_warning(series, 0.1);
    REQUIRE(flags.size() == 2);
    CHECK(flags[0].month == YearMonth{2020, 2});
    CHECK(flags[1].month == YearMonth{2020, 4});
    CHECK(early_warning(series, 0.5).empty());
    CHECK_THROWS_AS(early_warning(series, 0.0), InputError);
    CHECK_THROWS_AS(early_warning(series, 1.0), InputError);
}

TEST_CASE("correlation aligns by month with a forward lag on the second series") {
    const auto a = series_of({{{2020, 1}, 1},
                              {{2020, 2}, 2},
                              {{2020, 3}, 3},
                              {{2020, 4}, 4}});
    const auto b = series_of({{{2020, 2}, 1},
                              {{2020, 3}, 3},
                              {{2020, 4}, 2},
                              {{2020, 5}, 4}});
    // lag 1: pairs (a_t, b_{t+1}) over t = Jan..Apr
    CHECK(correlate(a, b, 1) == doctest::Approx(0.8));
    // lag 0: overlap Feb..Apr -> pairs (2,1),(3,3),(4,2)
    CHECK(correlate(a, b, 0) == doctest::Approx(0.5));
    const auto self = correlate(a, a, 0);
    CHECK(self == doctest::Approx(1.0));
    CHECK_THROWS_AS(correlate(a, b, 10), ComputeError); // no overlap
}
