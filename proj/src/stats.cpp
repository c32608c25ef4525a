#include "leadtime/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "leadtime/errors.hpp"

namespace leadtime {

DescriptiveStats weighted_stats_from_mass(const std::vector<double>& mass,
                                          int first_value) {
    if (mass.empty()) throw InputError("empty mass vector");
    DescriptiveStats s;
    s.weighted = true;
    double mean = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        mean += (first_value + static_cast<double>(i)) * mass[i];
    }
    double var = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        const double d = (first_value + static_cast<double>(i)) - mean;
        var += d * d * mass[i];
    }
    double cum = 0;
    double median = first_value + static_cast<double>(mass.size()) - 1;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        cum += mass[i];
        // the slack keeps exact half-mass ties (cumulative nights = total/2)
        // from slipping to the next value through summation rounding
        if (cum >= 0.5 - 1e-9) {
            median = first_value + static_cast<double>(i);
            break;
        }
    }
    s.mean = mean;
    s.sd = std::sqrt(std::max(var, 0.0));
    s.median = median;
    return s;
}

DescriptiveStats per_trip_stats(std::vector<double> values) {
    if (values.empty()) throw InputError("empty sample");
    DescriptiveStats s;
    s.weighted = false;
    const std::size_t n = values.size();
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    s.mean = mean;

    std::sort(values.begin(), values.end());
    if (n % 2 == 1) {
        s.median = values[n / 2];
    } else {
        s.median = 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    if (n == 1) {
        s.sd = 0;
        s.degenerate = true;
        return s;
    }
    double ss = 0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    return s;
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw InputError("empty sample for quantile");
    if (p < 0 || p > 1) throw InputError("quantile p outside [0,1]");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1) return values[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InputError("pearson: length mismatch");
    const std::size_t n = a.size();
    if (n < 3) throw ComputeError("pearson: need at least 3 points, got " +
                                  std::to_string(n));
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0 || sbb == 0) {
        throw ComputeError("pearson: zero variance in one of the series");
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace leadtime
