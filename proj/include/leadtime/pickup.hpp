#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "leadtime/distribution.hpp"

namespace leadtime {

// One point of a booking-window sweep. elapsed_index counts window
// positions consumed (0 = window start, window_length = check-in).
struct ForecastEvaluation {
    int elapsed_index = 0;
    int window_length = 0;
    double b_obs = 0;
    double c_hist = 0;
    bool defined = false; // false when c_hist = 0 (no historical mass yet)
    double forecast = 0;
    double actual = 0;
    double rel_error = 0;
    double bound = 0;
};

// B_hat = B_obs / C_hist. The historical cumulative fraction scales the
// observed count up to a total-demand estimate.
double pickup_forecast(double b_obs, double c_hist_at_delta);

// (forecast - actual) / actual; negative means underestimate.
double relative_error(double forecast, double actual);

// 2*D*(1 - delta/delta_max) / c_hist. Valid under the assumption that the
// per-bin divergence is uniform across the window; see the sweep property
// tests for both the holds and fails regimes.
double error_bound(double d, int delta, int delta_max, double c_hist_at_delta);

// Sweep over every elapsed index: derives B_obs from the actual curve, then
// forecast, relative error, and bound. Mass vectors are indexed by lead
// time 0..window_length.
std::vector<ForecastEvaluation> evaluate_horizon_sweep(
    const std::vector<double>& hist_mass, const std::vector<double>& actual_mass,
    double b_total_actual, double d);

std::vector<ForecastEvaluation> evaluate_horizon_sweep(
    const LeadTimeDistribution& hist, const LeadTimeDistribution& actual,
    double b_total_actual, double d);

// `delta,B_obs,C_hist,forecast,actual,rel_error,bound`; rows before any
// historical mass has accrued leave the derived columns empty.
std::string sweep_csv_text(const std::vector<ForecastEvaluation>& sweep);

struct DivergenceSummary {
    double max = 0;
    double mean = 0;
    std::map<std::string, double> quantiles; // permille keys: q025, q500, q975
};

// Observed L1 divergences across historical (hist, actual) pairs; feeds the
// scenario analysis that picks the D for error_bound.
DivergenceSummary estimate_D_scenarios(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& history);

} // namespace leadtime
