#include "leadtime/stl.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "leadtime/errors.hpp"

namespace leadtime {

namespace {

int next_odd_at_least(double x) {
    int v = static_cast<int>(std::ceil(x));
    if (v % 2 == 0) ++v;
    return v;
}

// Moving average of width w; length shrinks by w-1.
std::vector<double> moving_average(const std::vector<double>& v, int w) {
    std::vector<double> out(v.size() - static_cast<std::size_t>(w) + 1);
    double sum = 0;
    for (int i = 0; i < w; ++i) sum += v[static_cast<std::size_t>(i)];
    out[0] = sum / w;
    for (std::size_t i = 1; i < out.size(); ++i) {
        sum += v[i + static_cast<std::size_t>(w) - 1] - v[i - 1];
        out[i] = sum / w;
    }
    return out;
}

std::vector<double> index_positions(std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i + 1);
    return xs;
}

} // namespace

int StlParams::effective_trend_window() const {
    if (trend_window > 0) return trend_window;
    if (periodic_seasonal()) return next_odd_at_least(1.5 * period);
    return next_odd_at_least(1.5 * period / (1.0 - 1.5 / seasonal_window));
}

int StlParams::effective_low_pass_window() const {
    if (low_pass_window > 0) return low_pass_window;
    return next_odd_at_least(period);
}

void StlParams::validate() const {
    if (period < 2) throw InputError("stl: period must be >= 2");
    if (seasonal_window != 0 && (seasonal_window < 7 || seasonal_window % 2 == 0)) {
        throw InputError("stl: seasonal window must be an odd integer >= 7, or 0 for periodic");
    }
    if (trend_window != 0 && (trend_window < 3 || trend_window % 2 == 0)) {
        throw InputError("stl: trend window must be an odd integer >= 3");
    }
    if (low_pass_window != 0 && (low_pass_window < 3 || low_pass_window % 2 == 0)) {
        throw InputError("stl: low-pass window must be an odd integer >= 3");
    }
    if (inner_iterations < 1) throw InputError("stl: inner iterations must be >= 1");
    if (outer_iterations < 0) throw InputError("stl: outer iterations must be >= 0");
}

StlResult stl_decompose(const std::vector<double>& y, const StlParams& params) {
    params.validate();
    const std::size_t n = y.size();
    const int p = params.period;
    if (n < 2 * static_cast<std::size_t>(p)) {
        throw InputError("stl: series length " + std::to_string(n) +
                         " < 2*period = " + std::to_string(2 * p));
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw InputError("stl: non-finite value in series");
    }

    StlResult res;
    res.trend.assign(n, 0.0);
    res.seasonal.assign(n, 0.0);
    res.robustness_weights.assign(n, 1.0);

    const int trend_span = params.effective_trend_window();
    const int low_span = params.effective_low_pass_window();

    std::vector<double> detrended(n), extended(n + 2 * static_cast<std::size_t>(p));
    std::vector<double> deseasonalized(n);

    for (int outer = 0; outer <= params.outer_iterations; ++outer) {
        for (int inner = 0; inner < params.inner_iterations; ++inner) {
            // 1. detrend
            for (std::size_t t = 0; t < n; ++t) detrended[t] = y[t] - res.trend[t];

            // 2. cycle-subseries smoothing, extended one cycle on each side
            for (int s = 0; s < p; ++s) {
                std::vector<double> sub, subw;
                for (std::size_t t = static_cast<std::size_t>(s); t < n;
                     t += static_cast<std::size_t>(p)) {
                    sub.push_back(detrended[t]);
                    subw.push_back(res.robustness_weights[t]);
                }
                const std::size_t k = sub.size();
                if (params.periodic_seasonal()) {
                    double wsum = 0, vsum = 0;
                    for (std::size_t j = 0; j < k; ++j) {
                        wsum += subw[j];
                        vsum += subw[j] * sub[j];
                    }
                    const double val = wsum > 0 ? vsum / wsum
                                                : [&] {
                                                      double acc = 0;
                                                      for (double v : sub) acc += v;
                                                      ++res.diagnostics.zero_weight_fallbacks;
                                                      return acc / static_cast<double>(k);
                                                  }();
                    for (std::size_t j = 0; j < k + 2; ++j) {
                        extended[static_cast<std::size_t>(s) + j * static_cast<std::size_t>(p)] = val;
                    }
                } else {
                    auto xs = index_positions(k);
                    for (std::size_t j = 0; j < k + 2; ++j) {
                        const double x0 = static_cast<double>(j); // 0..k+1
                        extended[static_cast<std::size_t>(s) + j * static_cast<std::size_t>(p)] =
                            loess_fit_at(xs, sub, params.seasonal_window, 1, &subw, x0,
                                         &res.diagnostics);
                    }
                }
            }

            // 3. low-pass filter of the extended seasonal: MA(p), MA(p), MA(3),
            // then a degree-1 loess; result has length n
            auto low = moving_average(extended, p);
            low = moving_average(low, p);
            low = moving_average(low, 3);
            auto low_xs = index_positions(low.size());
            low = loess_smooth(low_xs, low, low_span, 1, nullptr, &res.diagnostics);

            // 4. seasonal = extended (center cycle) minus low-pass
            for (std::size_t t = 0; t < n; ++t) {
                res.seasonal[t] = extended[t + static_cast<std::size_t>(p)] - low[t];
            }

            // 5. deseasonalize
            for (std::size_t t = 0; t < n; ++t) deseasonalized[t] = y[t] - res.seasonal[t];

            // 6. trend smoothing
            auto xs = index_positions(n);
            res.trend = loess_smooth(xs, deseasonalized, trend_span, 1,
                                     &res.robustness_weights, &res.diagnostics);
        }

        if (outer < params.outer_iterations) {
            // bisquare robustness weights from the remainder
            std::vector<double> absr(n);
            for (std::size_t t = 0; t < n; ++t) {
                absr[t] = std::abs(y[t] - res.trend[t] - res.seasonal[t]);
            }
            std::vector<double> sorted = absr;
            std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2),
                             sorted.end());
            double med = sorted[n / 2];
            if (n % 2 == 0) {
                const double hi = med;
                std::nth_element(sorted.begin(),
                                 sorted.begin() + static_cast<std::ptrdiff_t>(n / 2 - 1),
                                 sorted.end());
                med = 0.5 * (sorted[n / 2 - 1] + hi);
            }
            const double cmad = 6.0 * med;
            double scale = 0;
            for (double v : y) scale = std::max(scale, std::abs(v));
            if (cmad <= 1e-12 * (scale + 1.0)) {
                // residuals are essentially zero; nothing to downweight
                std::fill(res.robustness_weights.begin(), res.robustness_weights.end(), 1.0);
            } else {
                const double c9 = 0.999 * cmad;
                const double c1 = 0.001 * cmad;
                for (std::size_t t = 0; t < n; ++t) {
                    const double r = absr[t];
                    if (r <= c1) {
                        res.robustness_weights[t] = 1.0;
                    } else if (r >= c9) {
                        res.robustness_weights[t] = 0.0;
                    } else {
                        const double u = r / cmad;
                        const double v = 1.0 - u * u;
                        res.robustness_weights[t] = v * v;
                    }
                }
            }
        }
    }

    res.remainder.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        res.remainder[t] = y[t] - res.trend[t] - res.seasonal[t];
    }
    return res;
}

DecomposedSeries decompose_divergence(const DivergenceSeries& series,
                                      const StlParams& params) {
    const auto& pts = series.points;
    if (pts.empty()) throw InputError("decompose_divergence: empty series");
    std::string missing;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        int prev = pts[i - 1].month.index();
        for (int idx = prev + 1; idx < pts[i].month.index(); ++idx) {
            if (!missing.empty()) missing += ", ";
            missing += format_year_month(YearMonth::from_index(idx));
        }
    }
    if (!missing.empty()) {
        throw InputError("decompose_divergence: series has month gaps (" + missing +
                         "); restrict the range or fill upstream");
    }

    DecomposedSeries out;
    out.months.reserve(pts.size());
    out.observed.reserve(pts.size());
    for (const auto& pt : pts) {
        out.months.push_back(pt.month);
        out.observed.push_back(pt.value);
    }
    out.components = stl_decompose(out.observed, params);
    return out;
}

} // namespace leadtime
