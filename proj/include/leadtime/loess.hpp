#pragma once

#include <vector>

namespace leadtime {

struct LoessDiagnostics {
    // Neighborhoods whose combined weights were all zero and fell back to
    // an unweighted fit.
    int zero_weight_fallbacks = 0;
};

// Locally weighted polynomial regression with tricube neighborhood weights.
// xs must be strictly increasing. span is the neighborhood size in points;
// when span > n the window covers everything and the effective half-width
// grows by (span-n)/2 mean spacings. weights (optional, per point) multiply
// the tricube weights; robustness weights go here.
//
// Evaluates the local fit at one target position.
double loess_fit_at(const std::vector<double>& xs, const std::vector<double>& ys,
                    int span, int degree, const std::vector<double>* weights,
                    double x0, LoessDiagnostics* diag = nullptr);

// Fitted values at every input position.
std::vector<double> loess_smooth(const std::vector<double>& xs,
                                 const std::vector<double>& ys, int span, int degree,
                                 const std::vector<double>* weights = nullptr,
                                 LoessDiagnostics* diag = nullptr);

} // namespace leadtime
