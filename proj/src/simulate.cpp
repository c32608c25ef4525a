#include "leadtime/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "leadtime/divergence.hpp"
#include "leadtime/errors.hpp"
#include "leadtime/ingest.hpp"
#include "leadtime/io.hpp"
#include "leadtime/rng.hpp"

namespace leadtime {

void PerturbationSpec::validate() const {
    if (!(sigma > 0)) throw InputError("perturbation sigma must be > 0");
    if (bins < 2) throw InputError("perturbation bins must be >= 2");
}

std::vector<double> perturb_distribution(const std::vector<double>& base,
                                         const PerturbationSpec& spec) {
    spec.validate();
    if (static_cast<int>(base.size()) != spec.bins) {
        throw InputError("base has " + std::to_string(base.size()) +
                         " bins, spec says " + std::to_string(spec.bins));
    }
    if (!is_normalized(base)) throw InputError("perturb: base not normalized");

    SplitMix64 rng(spec.seed);
    std::vector<double> out(base.size());
    double total = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        out[i] = base[i] + sample_half_normal(rng, spec.sigma);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

std::vector<double> bville_base() {
    // Bulk of short-lead bookings, a spike of one-week-ahead planners, and
    // a gaussian shoulder of long-lead planners. Constants tuned so the
    // year-1 statistics sit inside the published bands (see tests).
    constexpr double bulk_shape = 5.4;
    constexpr double bulk_scale = 1.05;
    constexpr double spike_weight = 0.22;
    constexpr double spike_at_8 = 0.94; // rest split 60/40 over leads 7 and 9
    constexpr double shoulder_weight = 0.29;
    constexpr double shoulder_center = 27.25;
    constexpr double shoulder_width = 3.72;

    std::vector<double> bulk(30), shoulder(30);
    double bulk_sum = 0, shoulder_sum = 0;
    for (int i = 0; i < 30; ++i) {
        const double lead = i + 1.0;
        bulk[static_cast<std::size_t>(i)] =
            std::pow(lead, bulk_shape) * std::exp(-lead / bulk_scale);
        bulk_sum += bulk[static_cast<std::size_t>(i)];
        const double z = (lead - shoulder_center) / shoulder_width;
        shoulder[static_cast<std::size_t>(i)] = std::exp(-z * z);
        shoulder_sum += shoulder[static_cast<std::size_t>(i)];
    }

    std::vector<double> v(30, 0.0);
    const double bulk_weight = 1.0 - spike_weight - shoulder_weight;
    for (int i = 0; i < 30; ++i) {
        v[static_cast<std::size_t>(i)] =
            bulk_weight * bulk[static_cast<std::size_t>(i)] / bulk_sum +
            shoulder_weight * shoulder[static_cast<std::size_t>(i)] / shoulder_sum;
    }
    v[7] += spike_weight * spike_at_8;
    v[6] += spike_weight * (1.0 - spike_at_8) * 0.6;
    v[8] += spike_weight * (1.0 - spike_at_8) * 0.4;

    double total = 0;
    for (double m : v) total += m;
    for (double& m : v) m /= total;
    return v;
}

BvilleFixture make_bville_fixture(std::uint64_t seed) {
    BvilleFixture fx;
    fx.dist_2019 = bville_base();
    fx.dist_2020 = perturb_distribution(fx.dist_2019, PerturbationSpec{0.05, seed, 30});
    return fx;
}

namespace {

double normal_cdf(double x, double mu, double sd) {
    return 0.5 * (1.0 + std::erf((x - mu) / (sd * std::sqrt(2.0))));
}

} // namespace

std::vector<double> discretized_mixture(const std::vector<MixtureComponent>& components,
                                        int delta_max) {
    if (components.empty()) throw InputError("mixture needs at least one component");
    if (delta_max < 1) throw InputError("delta_max must be >= 1");
    std::vector<double> mass(static_cast<std::size_t>(delta_max) + 1, 0.0);
    for (const auto& c : components) {
        if (!(c.weight > 0)) throw InputError("mixture component weight must be > 0");
        if (!(c.sd > 0)) throw InputError("mixture component sd must be > 0");
        for (int k = 0; k <= delta_max; ++k) {
            mass[static_cast<std::size_t>(k)] +=
                c.weight * (normal_cdf(k + 0.5, c.mean, c.sd) - normal_cdf(k - 0.5, c.mean, c.sd));
        }
    }
    double total = 0;
    for (double m : mass) total += m;
    if (!(total > 0)) throw ComputeError("mixture has no mass on the lead-time grid");
    for (double& m : mass) m /= total;
    return mass;
}

std::pair<std::vector<double>, std::vector<double>> make_figure1_pair() {
    constexpr double mu = 188.0, sd = 30.0, target_l1 = 0.25;
    constexpr int delta_max = 365;
    const auto a = discretized_mixture({{1.0, mu, sd}}, delta_max);

    auto bimodal = [&](double s) {
        const double comp_sd = std::sqrt(sd * sd - s * s);
        return discretized_mixture(
            {{0.5, mu - s, comp_sd}, {0.5, mu + s, comp_sd}}, delta_max);
    };

    // l1(A, bimodal(s)) grows monotonically with the separation s
    double lo = 1.0, hi = 29.0;
    if (l1_distance(a, bimodal(lo)) > target_l1 || l1_distance(a, bimodal(hi)) < target_l1) {
        throw ComputeError("figure-1 solve: target L1 not bracketed on s in [1,29]");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (l1_distance(a, bimodal(mid)) < target_l1) lo = mid;
        else hi = mid;
    }
    return {a, bimodal(0.5 * (lo + hi))};
}

void ScenarioSpec::validate() const {
    if (months < 1) throw InputError("scenario: months must be >= 1");
    if (delta_max < 1) throw InputError("scenario: delta_max must be >= 1");
    if (markets.empty()) throw InputError("scenario: at least one market required");
    for (const auto& m : markets) {
        if (m.city.empty()) throw InputError("scenario: market city empty");
        if (m.corridor != "destination" && m.corridor != "origin") {
            throw InputError("scenario: market corridor '" + m.corridor + "' unknown");
        }
        if (m.travel_type != "domestic" && m.travel_type != "international") {
            throw InputError("scenario: market travel_type '" + m.travel_type + "' unknown");
        }
    }
    if (base_distribution.empty()) {
        throw InputError("scenario: base_distribution needs components");
    }
    if (!(base_bookings > 0)) throw InputError("scenario: base_bookings must be > 0");
    if (!seasonal.empty() && seasonal.size() != 12) {
        throw InputError("scenario: seasonal must have 12 multipliers");
    }
    for (double s : seasonal) {
        if (!(s > 0)) throw InputError("scenario: seasonal multipliers must be > 0");
    }
    if (nights_min < 1 || nights_max < nights_min) {
        throw InputError("scenario: need 1 <= nights_min <= nights_max");
    }
    const int first = start_month.index();
    const int last = first + months - 1;
    for (const auto& s : shocks) {
        if (s.start.index() > s.end.index()) {
            throw InputError("scenario: shock start after end");
        }
        if (s.start.index() < first || s.end.index() > last) {
            throw InputError("scenario: shock window outside the date range");
        }
        if (s.short_lead_cutoff < 0 || s.short_lead_cutoff > delta_max) {
            throw InputError("scenario: shock cutoff outside 0..delta_max");
        }
        if (!(s.mass_multiplier > 0)) {
            throw InputError("scenario: shock multiplier must be > 0");
        }
    }
}

ScenarioSpec parse_scenario_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("scenario spec: invalid JSON: ") + e.what());
    }

    ScenarioSpec spec;
    try {
        spec.start_month = parse_year_month(j.at("start_month").get<std::string>());
        spec.months = j.at("months").get<int>();
        spec.delta_max = j.at("delta_max").get<int>();
        for (const auto& m : j.at("markets")) {
            spec.markets.push_back(MarketKey{m.at("city").get<std::string>(),
                                             m.at("corridor").get<std::string>(),
                                             m.at("travel_type").get<std::string>()});
        }
        for (const auto& c : j.at("base_distribution")) {
            spec.base_distribution.push_back(MixtureComponent{
                c.at("weight").get<double>(), c.at("mean").get<double>(),
                c.at("sd").get<double>()});
        }
        const auto& vol = j.at("volume");
        spec.base_bookings = vol.at("base_bookings").get<double>();
        spec.trend_per_month = vol.value("trend_per_month", 0.0);
        if (vol.contains("seasonal")) {
            spec.seasonal = vol.at("seasonal").get<std::vector<double>>();
        }
        if (j.contains("nights")) {
            spec.nights_min = j.at("nights").value("min", 1);
            spec.nights_max = j.at("nights").value("max", 4);
        }
        if (j.contains("shocks")) {
            for (const auto& s : j.at("shocks")) {
                ShockSpec shock;
                shock.start = parse_year_month(s.at("start").get<std::string>());
                shock.end = parse_year_month(s.at("end").get<std::string>());
                shock.short_lead_cutoff = s.at("short_lead_cutoff").get<int>();
                shock.mass_multiplier = s.at("mass_multiplier").get<double>();
                spec.shocks.push_back(shock);
            }
        }
        spec.seed_set = j.contains("seed");
        spec.seed = j.value("seed", 0ull);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("scenario spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::vector<double> scenario_target_mass(const ScenarioSpec& spec, YearMonth month) {
    auto mass = discretized_mixture(spec.base_distribution, spec.delta_max);
    for (const auto& s : spec.shocks) {
        if (month.index() < s.start.index() || month.index() > s.end.index()) continue;
        for (int d = 0; d <= s.short_lead_cutoff; ++d) {
            mass[static_cast<std::size_t>(d)] *= s.mass_multiplier;
        }
        double total = 0;
        for (double m : mass) total += m;
        for (double& m : mass) m /= total;
    }
    return mass;
}

namespace {

int days_in_month_of(YearMonth ym) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (ym.month == 2) {
        const int y = ym.year;
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[ym.month - 1];
}

} // namespace

std::vector<BookingRecord> generate_scenario(const ScenarioSpec& spec) {
    spec.validate();
    std::vector<BookingRecord> records;

    for (std::size_t market_idx = 0; market_idx < spec.markets.size(); ++market_idx) {
        const MarketKey& market = spec.markets[market_idx];
        for (int k = 0; k < spec.months; ++k) {
            const YearMonth month = YearMonth::from_index(spec.start_month.index() + k);
            const auto mass = scenario_target_mass(spec, month);
            const auto cdf = [&] {
                std::vector<double> c(mass.size());
                double sum = 0;
                for (std::size_t i = 0; i < mass.size(); ++i) {
                    sum += mass[i];
                    c[i] = sum;
                }
                return c;
            }();

            double volume = spec.base_bookings * std::pow(1.0 + spec.trend_per_month, k);
            if (!spec.seasonal.empty()) volume *= spec.seasonal[static_cast<std::size_t>(month.month - 1)];
            const int count = static_cast<int>(std::llround(volume));

            SplitMix64 rng(derive_subseed(spec.seed, static_cast<std::uint64_t>(month.index()),
                                          static_cast<std::uint64_t>(market_idx)));
            const int month_days = days_in_month_of(month);
            const int nights_range = spec.nights_max - spec.nights_min + 1;

            for (int i = 0; i < count; ++i) {
                const double u = rng.next_unit();
                const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
                const int lead = static_cast<int>(std::min<std::size_t>(
                    static_cast<std::size_t>(it - cdf.begin()), mass.size() - 1));
                const int nights =
                    spec.nights_min +
                    std::min(nights_range - 1,
                             static_cast<int>(rng.next_unit() * nights_range));

                BookingRecord r;
                r.checkin_date = Date{month.year, month.month, 1 + i % month_days};
                r.booking_date =
                    civil_from_days(days_from_civil(r.checkin_date) - lead);
                r.nights = nights;
                r.city = market.city;
                r.corridor = market.corridor;
                r.travel_type = market.travel_type;
                records.push_back(std::move(r));
            }
        }
    }
    return records;
}

std::string fixture_hash() {
    const BvilleFixture f = make_bville_fixture();
    std::string blob = mass_csv_text(f.dist_2019, 1);
    blob += mass_csv_text(f.dist_2020, 1);
    blob += std::to_string(f.bookings_2019);
    blob += ',';
    blob += std::to_string(f.bookings_2020);
    blob += ',';
    blob += std::to_string(kBvilleSeed);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob)));
    return std::string(buf);
}

std::string bookings_csv_text(const std::vector<BookingRecord>& records) {
    std::string s = kBookingsHeader;
    s += '\n';
    for (const auto& r : records) {
        s += format_date(r.booking_date);
        s += ',';
        s += format_date(r.checkin_date);
        s += ',';
        s += std::to_string(r.nights);
        s += ',';
        s += r.city;
        s += ',';
        s += r.corridor;
        s += ',';
        s += r.travel_type;
        s += '\n';
    }
    return s;
}

} // namespace leadtime
