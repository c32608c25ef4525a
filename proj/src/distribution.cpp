#include "leadtime/distribution.hpp"

#include <cmath>

#include "leadtime/errors.hpp"

namespace leadtime {

bool is_normalized(const std::vector<double>& mass, double tol) {
    double sum = 0;
    for (double m : mass) {
        if (m < 0 || !std::isfinite(m)) return false;
        sum += m;
    }
    return std::abs(sum - 1.0) <= tol;
}

LeadTimeDistribution build_distribution(const MonthlyCohort& cohort, int lead_cap) {
    if (lead_cap < 1) throw InputError("lead_cap must be >= 1");
    if (cohort.bookings.empty()) {
        throw ComputeError("no bookings in cohort " + cohort.market.label() + " " +
                           format_year_month(cohort.month));
    }
    LeadTimeDistribution dist;
    dist.month = cohort.month;
    dist.market = cohort.market;
    dist.mass.assign(static_cast<std::size_t>(lead_cap) + 1, 0.0);
    double total = 0;
    for (const auto& r : cohort.bookings) {
        const int lead = r.lead_time();
        if (lead > lead_cap) {
            throw InputError("record with lead time " + std::to_string(lead) +
                             " exceeds cap " + std::to_string(lead_cap) +
                             " (exclude upstream)");
        }
        dist.mass[static_cast<std::size_t>(lead)] += r.nights;
        total += r.nights;
    }
    for (double& m : dist.mass) m /= total;
    dist.total_nights = total;
    return dist;
}

DescriptiveStats describe(const LeadTimeDistribution& dist) {
    return weighted_stats_from_mass(dist.mass, 0);
}

DescriptiveStats describe_per_trip(const MonthlyCohort& cohort) {
    if (cohort.bookings.empty()) {
        throw ComputeError("no bookings in cohort " + cohort.market.label() + " " +
                           format_year_month(cohort.month));
    }
    std::vector<double> leads;
    leads.reserve(cohort.bookings.size());
    for (const auto& r : cohort.bookings) {
        leads.push_back(static_cast<double>(r.lead_time()));
    }
    return per_trip_stats(std::move(leads));
}

std::vector<double> cumulative_mass(const std::vector<double>& mass) {
    std::vector<double> c(mass.size());
    double sum = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        sum += mass[i];
        c[i] = sum;
    }
    return c;
}

std::vector<double> pickup_curve(const LeadTimeDistribution& dist) {
    return cumulative_mass(dist.mass);
}

} // namespace leadtime
