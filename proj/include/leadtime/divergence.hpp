#pragma once

#include <map>
#include <string>
#include <vector>

#include "leadtime/distribution.hpp"

namespace leadtime {

enum class DivergenceMode { yoy, baseline, partial };

std::string mode_name(DivergenceMode mode, int horizon = -1);

struct DivergencePoint {
    YearMonth month;
    double value = 0;
};

struct DivergenceSeries {
    DivergenceMode mode = DivergenceMode::yoy;
    MarketKey market;
    int baseline_year = -1; // baseline mode only
    int horizon = -1;       // partial mode only
    std::vector<DivergencePoint> points; // months strictly increasing
    std::vector<YearMonth> gaps;         // months skipped (no counterpart)
};

// Normalized L1 distance D(p,q) = (1/2) sum |p-q|, in [0,1] for probability
// vectors. Rejects length mismatches and non-normalized inputs (silent
// renormalization would mask upstream bugs).
double l1_distance(const std::vector<double>& p, const std::vector<double>& q);

// Month t vs the same calendar month one year earlier.
DivergenceSeries yoy_series(const std::map<YearMonth, LeadTimeDistribution>& dists);

// Month t vs the same calendar month of a fixed reference year.
DivergenceSeries baseline_series(const std::map<YearMonth, LeadTimeDistribution>& dists,
                                 int baseline_year);

// In-progress distribution truncated at horizon H: mass over delta = 0..H
// renormalized over the nights observed in that range.
struct PartialDistribution {
    int horizon = 0;
    std::vector<double> mass; // size horizon+1
    double observed_nights = 0;
};

PartialDistribution build_partial(const MonthlyCohort& cohort, int horizon);
PartialDistribution partial_from_distribution(const LeadTimeDistribution& dist,
                                              int horizon);

// Renormalized arithmetic mean of the given partials' mass vectors.
PartialDistribution historical_partial_reference(
    const std::vector<PartialDistribution>& partials);

double partial_l1(const PartialDistribution& current,
                  const PartialDistribution& historical);

// D_H(t) per month: current partial vs the mean of prior same-calendar-month
// partials. reference_years = 0 uses all available history.
DivergenceSeries partial_series(const std::map<YearMonth, LeadTimeDistribution>& dists,
                                int horizon, int reference_years = 0);

// Months whose value exceeds the threshold, in order.
std::vector<DivergencePoint> early_warning(const DivergenceSeries& series,
                                           double threshold);

// Pearson r over the lag-aligned overlap; pairs are (a_t, b_{t+lag}), so a
// positive lag tests whether a leads b.
double correlate(const DivergenceSeries& a, const DivergenceSeries& b, int lag);

} // namespace leadtime
