#include "leadtime/pickup.hpp"

#include <cmath>

#include "leadtime/divergence.hpp"
#include "leadtime/errors.hpp"
#include "leadtime/io.hpp"
#include "leadtime/stats.hpp"

namespace leadtime {

double pickup_forecast(double b_obs, double c_hist_at_delta) {
    if (b_obs < 0) throw InputError("observed bookings must be >= 0");
    if (!(c_hist_at_delta > 0)) {
        throw InputError("no historical mass accrued at this horizon");
    }
    if (c_hist_at_delta > 1 + kMassTolerance) {
        throw InputError("cumulative fraction exceeds 1");
    }
    return b_obs / c_hist_at_delta;
}

double relative_error(double forecast, double actual) {
    if (!(actual > 0)) throw InputError("actual must be > 0");
    return (forecast - actual) / actual;
}

double error_bound(double d, int delta, int delta_max, double c_hist_at_delta) {
    if (d < 0 || d > 1) throw InputError("divergence D must lie in [0,1]");
    if (delta < 0) throw InputError("delta must be >= 0");
    if (delta > delta_max) throw InputError("delta exceeds delta_max");
    if (delta == delta_max) return 0.0;
    if (!(c_hist_at_delta > 0)) {
        throw InputError("no historical mass accrued at this horizon");
    }
    return 2.0 * d * (1.0 - static_cast<double>(delta) / delta_max) / c_hist_at_delta;
}

std::vector<ForecastEvaluation> evaluate_horizon_sweep(
    const std::vector<double>& hist_mass, const std::vector<double>& actual_mass,
    double b_total_actual, double d) {
    if (hist_mass.size() != actual_mass.size()) {
        throw InputError("horizon sweep: distributions on different grids (" +
                         std::to_string(hist_mass.size()) + " vs " +
                         std::to_string(actual_mass.size()) + " bins)");
    }
    if (hist_mass.empty()) throw InputError("horizon sweep: empty distributions");
    if (!(b_total_actual > 0)) throw InputError("horizon sweep: total bookings must be > 0");
    if (!is_normalized(hist_mass)) {
        throw InputError("horizon sweep: historical mass not normalized");
    }
    if (!is_normalized(actual_mass)) {
        throw InputError("horizon sweep: actual mass not normalized");
    }

    auto c_hist = cumulative_mass(hist_mass);
    auto c_actual = cumulative_mass(actual_mass);
    // use cumulative fractions of the supplied mass: dividing by the final sum
    // absorbs summation rounding, so the window end closes at exactly 1 and the
    // full-window forecast reproduces the actual total exactly
    const double hist_total = c_hist.back();
    const double actual_total = c_actual.back();
    for (auto& c : c_hist) c /= hist_total;
    for (auto& c : c_actual) c /= actual_total;
    const int window = static_cast<int>(hist_mass.size()) - 1;

    std::vector<ForecastEvaluation> sweep;
    sweep.reserve(hist_mass.size());
    for (int e = 0; e <= window; ++e) {
        ForecastEvaluation ev;
        ev.elapsed_index = e;
        ev.window_length = window;
        ev.c_hist = c_hist[static_cast<std::size_t>(e)];
        ev.b_obs = c_actual[static_cast<std::size_t>(e)] * b_total_actual;
        ev.actual = b_total_actual;
        if (ev.c_hist > 0) {
            ev.defined = true;
            ev.forecast = pickup_forecast(ev.b_obs, ev.c_hist);
            ev.rel_error = relative_error(ev.forecast, ev.actual);
            ev.bound = error_bound(d, e, window, ev.c_hist);
        }
        sweep.push_back(ev);
    }
    return sweep;
}

std::vector<ForecastEvaluation> evaluate_horizon_sweep(
    const LeadTimeDistribution& hist, const LeadTimeDistribution& actual,
    double b_total_actual, double d) {
    return evaluate_horizon_sweep(hist.mass, actual.mass, b_total_actual, d);
}

std::string sweep_csv_text(const std::vector<ForecastEvaluation>& sweep) {
    std::string csv = "delta,B_obs,C_hist,forecast,actual,rel_error,bound\n";
    for (const auto& row : sweep) {
        csv += std::to_string(row.elapsed_index);
        csv += ',';
        csv += format_double(row.b_obs);
        csv += ',';
        csv += format_double(row.c_hist);
        csv += ',';
        if (row.defined) csv += format_double(row.forecast);
        csv += ',';
        csv += format_double(row.actual);
        csv += ',';
        if (row.defined) csv += format_double(row.rel_error);
        csv += ',';
        if (row.defined) csv += format_double(row.bound);
        csv += '\n';
    }
    return csv;
}

DivergenceSummary estimate_D_scenarios(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& history) {
    if (history.empty()) throw InputError("estimate_D_scenarios: empty history");
    std::vector<double> ds;
    ds.reserve(history.size());
    for (const auto& [hist, actual] : history) {
        ds.push_back(l1_distance(hist, actual));
    }
    DivergenceSummary summary;
    double sum = 0;
    for (double v : ds) {
        sum += v;
        summary.max = std::max(summary.max, v);
    }
    summary.mean = sum / static_cast<double>(ds.size());
    summary.quantiles["q025"] = quantile_type7(ds, 0.025);
    summary.quantiles["q500"] = quantile_type7(ds, 0.5);
    summary.quantiles["q975"] = quantile_type7(ds, 0.975);
    return summary;
}

} // namespace leadtime
