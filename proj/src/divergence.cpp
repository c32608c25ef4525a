#include "leadtime/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "leadtime/errors.hpp"
#include "leadtime/stats.hpp"

namespace leadtime {

std::string mode_name(DivergenceMode mode, int horizon) {
    switch (mode) {
        case DivergenceMode::yoy: return "yoy";
        case DivergenceMode::baseline: return "baseline";
        case DivergenceMode::partial:
            return horizon >= 0 ? "partial" + std::to_string(horizon) : "partial";
    }
    return "unknown";
}

double l1_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw InputError("l1_distance: length mismatch (" + std::to_string(p.size()) +
                         " vs " + std::to_string(q.size()) + ")");
    }
    if (!is_normalized(p)) throw InputError("l1_distance: first vector not normalized");
    if (!is_normalized(q)) throw InputError("l1_distance: second vector not normalized");
    double sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

namespace {

DivergenceSeries compare_series(const std::map<YearMonth, LeadTimeDistribution>& dists,
                                DivergenceMode mode, int baseline_year) {
    DivergenceSeries series;
    series.mode = mode;
    series.baseline_year = mode == DivergenceMode::baseline ? baseline_year : -1;
    if (!dists.empty()) series.market = dists.begin()->second.market;

    for (const auto& [month, dist] : dists) {
        YearMonth ref = mode == DivergenceMode::yoy
                            ? YearMonth{month.year - 1, month.month}
                            : YearMonth{baseline_year, month.month};
        if (mode == DivergenceMode::baseline && month.year == baseline_year) continue;
        auto it = dists.find(ref);
        if (it == dists.end()) {
            series.gaps.push_back(month);
            continue;
        }
        series.points.push_back({month, l1_distance(dist.mass, it->second.mass)});
    }
    return series;
}

} // namespace

DivergenceSeries yoy_series(const std::map<YearMonth, LeadTimeDistribution>& dists) {
    auto series = compare_series(dists, DivergenceMode::yoy, -1);
    if (series.points.empty()) {
        throw ComputeError("yoy_series: insufficient history (no month has a "
                           "month-12 counterpart)");
    }
    return series;
}

DivergenceSeries baseline_series(const std::map<YearMonth, LeadTimeDistribution>& dists,
                                 int baseline_year) {
    bool baseline_present = false;
    for (const auto& [month, dist] : dists) {
        if (month.year == baseline_year) {
            baseline_present = true;
            break;
        }
    }
    if (!baseline_present) {
        throw ComputeError("baseline_series: baseline year " +
                           std::to_string(baseline_year) + " absent from data");
    }
    return compare_series(dists, DivergenceMode::baseline, baseline_year);
}

namespace {

PartialDistribution normalize_partial(std::vector<double> mass, int horizon,
                                      double observed) {
    if (observed <= 0) {
        throw ComputeError("partial distribution: zero observed nights within horizon " +
                           std::to_string(horizon));
    }
    for (double& m : mass) m /= observed;
    return PartialDistribution{horizon, std::move(mass), observed};
}

} // namespace

PartialDistribution build_partial(const MonthlyCohort& cohort, int horizon) {
    if (horizon < 0) throw InputError("horizon must be >= 0");
    std::vector<double> mass(static_cast<std::size_t>(horizon) + 1, 0.0);
    double observed = 0;
    for (const auto& r : cohort.bookings) {
        const int lead = r.lead_time();
        if (lead > horizon) continue;
        mass[static_cast<std::size_t>(lead)] += r.nights;
        observed += r.nights;
    }
    return normalize_partial(std::move(mass), horizon, observed);
}

PartialDistribution partial_from_distribution(const LeadTimeDistribution& dist,
                                              int horizon) {
    if (horizon < 0 || horizon > dist.cap()) {
        throw InputError("horizon " + std::to_string(horizon) +
                         " outside distribution range 0.." + std::to_string(dist.cap()));
    }
    std::vector<double> mass(dist.mass.begin(), dist.mass.begin() + horizon + 1);
    double fraction = 0;
    for (double m : mass) fraction += m;
    if (fraction <= 0) {
        throw ComputeError("partial distribution: zero observed nights within horizon " +
                           std::to_string(horizon));
    }
    for (double& m : mass) m /= fraction;
    return PartialDistribution{horizon, std::move(mass), fraction * dist.total_nights};
}

PartialDistribution historical_partial_reference(
    const std::vector<PartialDistribution>& partials) {
    if (partials.empty()) throw InputError("no partials to average");
    const int horizon = partials.front().horizon;
    std::vector<double> mean(static_cast<std::size_t>(horizon) + 1, 0.0);
    double nights = 0;
    for (const auto& p : partials) {
        if (p.horizon != horizon) {
            throw InputError("horizon mismatch while averaging partials");
        }
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p.mass[i];
        nights += p.observed_nights;
    }
    double sum = 0;
    for (double m : mean) sum += m;
    for (double& m : mean) m /= sum;
    return PartialDistribution{horizon, std::move(mean), nights};
}

double partial_l1(const PartialDistribution& current,
                  const PartialDistribution& historical) {
    if (current.horizon != historical.horizon) {
        throw InputError("partial_l1: horizon mismatch (" +
                         std::to_string(current.horizon) + " vs " +
                         std::to_string(historical.horizon) + ")");
    }
    return l1_distance(current.mass, historical.mass);
}

DivergenceSeries partial_series(const std::map<YearMonth, LeadTimeDistribution>& dists,
                                int horizon, int reference_years) {
    DivergenceSeries series;
    series.mode = DivergenceMode::partial;
    series.horizon = horizon;
    if (!dists.empty()) series.market = dists.begin()->second.market;

    for (const auto& [month, dist] : dists) {
        std::vector<PartialDistribution> history;
        for (auto it = dists.begin(); it != dists.end(); ++it) {
            const YearMonth& m = it->first;
            if (m.month != month.month || m.year >= month.year) continue;
            if (reference_years > 0 && m.year < month.year - reference_years) continue;
            history.push_back(partial_from_distribution(it->second, horizon));
        }
        if (history.empty()) {
            series.gaps.push_back(month);
            continue;
        }
        auto reference = historical_partial_reference(history);
        auto current = partial_from_distribution(dist, horizon);
        series.points.push_back({month, partial_l1(current, reference)});
    }
    if (series.points.empty()) {
        throw ComputeError("partial_series: no month has prior same-calendar-month history");
    }
    return series;
}

std::vector<DivergencePoint> early_warning(const DivergenceSeries& series,
                                           double threshold) {
    if (!(threshold > 0 && threshold < 1)) {
        throw InputError("threshold must lie in (0,1)");
    }
    std::vector<DivergencePoint> flagged;
    for (const auto& p : series.points) {
        if (p.value > threshold) flagged.push_back(p);
    }
    return flagged;
}

double correlate(const DivergenceSeries& a, const DivergenceSeries& b, int lag) {
    std::map<int, double> bvals;
    for (const auto& p : b.points) bvals[p.month.index()] = p.value;
    std::vector<double> xs, ys;
    for (const auto& p : a.points) {
        auto it = bvals.find(p.month.index() + lag);
        if (it == bvals.end()) continue;
        xs.push_back(p.value);
        ys.push_back(it->second);
    }
    if (xs.size() < 3) {
        throw ComputeError("correlate: only " + std::to_string(xs.size()) +
                           " overlapping months after lag alignment (need >= 3)");
    }
    return pearson(xs, ys);
}

} // namespace leadtime
