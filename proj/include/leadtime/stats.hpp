#pragma once

#include <vector>

namespace leadtime {

struct DescriptiveStats {
    double mean = 0;
    double median = 0;
    double sd = 0;
    bool weighted = true;
    // Set when sample SD was requested for n=1 and reported as 0.
    bool degenerate = false;
};

// Stats of the normalized mass vector; index i maps to value first_value+i.
// Population SD (a mass vector has no n for a Bessel correction); median is
// the smallest value whose cumulative mass reaches 0.5.
DescriptiveStats weighted_stats_from_mass(const std::vector<double>& mass,
                                          int first_value);

// Plain per-observation statistics: mean = (1/n) sum, median averages the
// two middle order statistics for even n, SD uses the n-1 form.
DescriptiveStats per_trip_stats(std::vector<double> values);

// Linear interpolation of order statistics (type-7). p in [0,1].
double quantile_type7(std::vector<double> values, double p);

// Pearson correlation. Throws ComputeError when n < 3 or either side has
// zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

} // namespace leadtime
