#pragma once

#include <vector>

#include "leadtime/divergence.hpp"
#include "leadtime/loess.hpp"

namespace leadtime {

// STL tuning knobs (Cleveland et al. 1990). A window of 0 means "derive the
// default": seasonal 0 = periodic (cycle-subseries means), trend 0 = next
// odd >= 1.5*period/(1 - 1.5/seasonal_window) (19 for periodic monthly),
// low-pass 0 = next odd >= period.
struct StlParams {
    int period = 12;
    int seasonal_window = 0; // 0 = periodic
    int trend_window = 0;
    int low_pass_window = 0;
    int inner_iterations = 2;
    int outer_iterations = 1;

    bool periodic_seasonal() const { return seasonal_window == 0; }
    int effective_trend_window() const;
    int effective_low_pass_window() const;
    void validate() const;
};

struct StlResult {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> remainder; // y - trend - seasonal, exactly
    std::vector<double> robustness_weights;
    LoessDiagnostics diagnostics;
};

// Additive decomposition y = trend + seasonal + remainder.
StlResult stl_decompose(const std::vector<double>& series, const StlParams& params);

struct DecomposedSeries {
    std::vector<YearMonth> months;
    std::vector<double> observed;
    StlResult components;
};

// Runs stl_decompose over a divergence series' values; the series must have
// no month gaps.
DecomposedSeries decompose_divergence(const DivergenceSeries& series,
                                      const StlParams& params);

} // namespace leadtime
