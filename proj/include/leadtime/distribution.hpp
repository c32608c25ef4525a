#pragma once

#include <vector>

#include "leadtime/records.hpp"
#include "leadtime/stats.hpp"

namespace leadtime {

inline constexpr double kMassTolerance = 1e-9;

// Nights-weighted lead-time distribution for one (month, market) cell.
// mass[d] is the fraction of all nights booked at lead time d, d = 0..cap.
struct LeadTimeDistribution {
    YearMonth month;
    MarketKey market;
    std::vector<double> mass;
    double total_nights = 0;

    int cap() const { return static_cast<int>(mass.size()) - 1; }
};

bool is_normalized(const std::vector<double>& mass, double tol = kMassTolerance);

// mass[d] = (sum of nights with lead d) / (total nights), d = 0..lead_cap.
// Records beyond lead_cap must have been excluded upstream. Throws
// ComputeError on an empty cohort (denominator zero).
LeadTimeDistribution build_distribution(const MonthlyCohort& cohort, int lead_cap);

// Nights-weighted statistics of the distribution.
DescriptiveStats describe(const LeadTimeDistribution& dist);

// Per-trip statistics over the cohort's lead times (each booking counts
// once regardless of nights).
DescriptiveStats describe_per_trip(const MonthlyCohort& cohort);

// Inclusive prefix sums: C[e] = sum of mass[0..e]. The index e is the
// elapsed window position; e + days_before = window length (see helpers
// below). C is non-decreasing with C[cap] = 1 for a valid distribution.
std::vector<double> cumulative_mass(const std::vector<double>& mass);
std::vector<double> pickup_curve(const LeadTimeDistribution& dist);

// The booking window is narrated from both ends: "17 of 30 days elapsed"
// is the same moment as "13 days before check-in".
inline int elapsed_from_days_before(int days_before, int window_length) {
    return window_length - days_before;
}
inline int days_before_from_elapsed(int elapsed, int window_length) {
    return window_length - elapsed;
}

} // namespace leadtime
