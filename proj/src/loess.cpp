#include "leadtime/loess.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "leadtime/errors.hpp"

namespace leadtime {

namespace {

void validate_inputs(const std::vector<double>& xs, const std::vector<double>& ys,
                     int span, int degree, const std::vector<double>* weights) {
    if (xs.size() != ys.size()) throw InputError("loess: xs/ys length mismatch");
    if (xs.empty()) throw InputError("loess: empty input");
    if (degree < 0 || degree > 2) throw InputError("loess: degree must be 0, 1, or 2");
    if (span < degree + 1) {
        throw InputError("loess: span " + std::to_string(span) +
                         " < degree+1 = " + std::to_string(degree + 1));
    }
    if (weights && weights->size() != xs.size()) {
        throw InputError("loess: weights length mismatch");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw InputError("loess: xs not strictly increasing");
    }
}

// Indices [lo, hi] of the `count` points nearest to x0.
std::pair<std::size_t, std::size_t> neighborhood(const std::vector<double>& xs,
                                                 int count, double x0) {
    const std::size_t n = xs.size();
    const std::size_t q = std::min<std::size_t>(static_cast<std::size_t>(count), n);
    auto it = std::lower_bound(xs.begin(), xs.end(), x0);
    std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    std::size_t lo = hi;
    // grow the window one point at a time toward the nearer side
    while (hi - lo < q) {
        const bool can_left = lo > 0;
        const bool can_right = hi < n;
        if (can_left && can_right) {
            if (x0 - xs[lo - 1] <= xs[hi] - x0) --lo;
            else ++hi;
        } else if (can_left) {
            --lo;
        } else {
            ++hi;
        }
    }
    return {lo, hi - 1};
}

struct Fit {
    double b0 = 0, b1 = 0, b2 = 0; // coefficients about x0
};

// Weighted LS polynomial about x0 over [lo, hi]. Degrades the degree when
// the normal equations are singular (e.g. all weight on one point).
Fit weighted_poly_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<double>& w, std::size_t lo, std::size_t hi,
                      int degree, double x0) {
    Fit fit;
    if (degree >= 2) {
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            const double d = xs[i] - x0;
            const double wi = w[i - lo];
            s0 += wi;
            s1 += wi * d;
            s2 += wi * d * d;
            s3 += wi * d * d * d;
            s4 += wi * d * d * d * d;
            t0 += wi * ys[i];
            t1 += wi * d * ys[i];
            t2 += wi * d * d * ys[i];
        }
        // solve [s0 s1 s2; s1 s2 s3; s2 s3 s4] b = [t0 t1 t2]
        const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) +
                           s2 * (s1 * s3 - s2 * s2);
        const double scale = s0 * s2 * s4 + 1e-300;
        if (std::abs(det) > 1e-12 * std::abs(scale)) {
            fit.b0 = (t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - s3 * t2) +
                      s2 * (t1 * s3 - s2 * t2)) / det;
            return fit;
        }
        degree = 1;
    }
    if (degree == 1) {
        double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            const double d = xs[i] - x0;
            const double wi = w[i - lo];
            s0 += wi;
            s1 += wi * d;
            s2 += wi * d * d;
            t0 += wi * ys[i];
            t1 += wi * d * ys[i];
        }
        const double det = s0 * s2 - s1 * s1;
        if (std::abs(det) > 1e-12 * std::abs(s0 * s2 + 1e-300)) {
            fit.b0 = (s2 * t0 - s1 * t1) / det;
            return fit;
        }
        // fall through to degree 0
    }
    double s0 = 0, t0 = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        s0 += w[i - lo];
        t0 += w[i - lo] * ys[i];
    }
    fit.b0 = t0 / s0;
    return fit;
}

} // namespace

double loess_fit_at(const std::vector<double>& xs, const std::vector<double>& ys,
                    int span, int degree, const std::vector<double>* weights,
                    double x0, LoessDiagnostics* diag) {
    validate_inputs(xs, ys, span, degree, weights);
    const std::size_t n = xs.size();
    auto [lo, hi] = neighborhood(xs, span, x0);

    double h = std::max(x0 - xs[lo], xs[hi] - x0);
    if (static_cast<std::size_t>(span) > n) {
        const double mean_spacing = n > 1 ? (xs[n - 1] - xs[0]) / static_cast<double>(n - 1) : 1.0;
        h += static_cast<double>(static_cast<std::size_t>(span) - n) / 2.0 * mean_spacing;
    }

    std::vector<double> w(hi - lo + 1);
    const double tiny = 1e-12 * (std::abs(xs[hi]) + std::abs(xs[lo]) + 1.0);
    for (std::size_t i = lo; i <= hi; ++i) {
        double wi;
        if (h <= tiny) {
            wi = 1.0; // all neighbors effectively at x0
        } else {
            const double r = std::abs(xs[i] - x0) / h;
            if (r >= 0.999) {
                wi = 0.0;
            } else if (r <= 0.001) {
                wi = 1.0;
            } else {
                const double u = 1.0 - r * r * r;
                wi = u * u * u;
            }
        }
        if (weights) wi *= (*weights)[i];
        w[i - lo] = wi;
    }

    double wsum = 0;
    for (double wi : w) wsum += wi;
    if (wsum <= 0) {
        // every candidate got zero weight (e.g. robustness zeroed the whole
        // window); fall back to an unweighted fit and report it
        if (diag) ++diag->zero_weight_fallbacks;
        std::fill(w.begin(), w.end(), 1.0);
    }

    return weighted_poly_fit(xs, ys, w, lo, hi, degree, x0).b0;
}

std::vector<double> loess_smooth(const std::vector<double>& xs,
                                 const std::vector<double>& ys, int span, int degree,
                                 const std::vector<double>* weights,
                                 LoessDiagnostics* diag) {
    validate_inputs(xs, ys, span, degree, weights);
    std::vector<double> fitted(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fitted[i] = loess_fit_at(xs, ys, span, degree, weights, xs[i], diag);
    }
    return fitted;
}

} // namespace leadtime
