#include "leadtime/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "leadtime/errors.hpp"
#include "leadtime/io.hpp"
#include "leadtime/simulate.hpp"
#include "leadtime/version.hpp"

namespace leadtime {

void AnalysisConfig::validate() const {
    if (lead_cap < 1) throw InputError("lead_cap must be >= 1");
    if (baseline_year != 0 && (baseline_year < 1583 || baseline_year > 9999)) {
        throw InputError("baseline_year out of range");
    }
    for (int h : partial_horizons) {
        if (h < 1 || h > lead_cap) {
            throw InputError("partial horizon " + std::to_string(h) +
                             " must be in [1, lead_cap]");
        }
    }
    if (!(warn_threshold > 0 && warn_threshold < 1)) {
        throw InputError("warn_threshold must be in (0, 1)");
    }
    stl.validate();
    if (threads < 0) throw InputError("threads must be >= 0");
}

AnalysisConfig parse_analysis_config(const std::string& json_text) {
    AnalysisConfig config;
    try {
        const auto j = nlohmann::json::parse(json_text);
        config.lead_cap = j.value("lead_cap", config.lead_cap);
        config.baseline_year = j.value("baseline_year", config.baseline_year);
        config.weighted_stats = j.value("weighted_stats", config.weighted_stats);
        if (j.contains("partial_horizons")) {
            config.partial_horizons =
                j.at("partial_horizons").get<std::vector<int>>();
        }
        config.warn_threshold = j.value("warn_threshold", config.warn_threshold);
        if (j.contains("stl")) {
            const auto& s = j.at("stl");
            config.stl.period = s.value("period", config.stl.period);
            config.stl.seasonal_window =
                s.value("seasonal_window", config.stl.seasonal_window);
            config.stl.trend_window = s.value("trend_window", config.stl.trend_window);
            config.stl.low_pass_window =
                s.value("low_pass_window", config.stl.low_pass_window);
            config.stl.inner_iterations =
                s.value("inner_iterations", config.stl.inner_iterations);
            config.stl.outer_iterations =
                s.value("outer_iterations", config.stl.outer_iterations);
        }
        if (j.contains("markets")) {
            for (const auto& m : j.at("markets")) {
                config.markets.push_back(
                    MarketKey{m.at("city").get<std::string>(),
                              m.at("corridor").get<std::string>(),
                              m.at("travel_type").get<std::string>()});
            }
        }
        config.threads = j.value("threads", config.threads);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("analysis config: ") + e.what());
    }
    config.validate();
    return config;
}

std::vector<AnnualRatioRow> annual_ratio_table(
    const std::map<int, DescriptiveStats>& annual, int baseline_year) {
    auto ratio = [](double value, double reference) {
        RatioCell cell;
        if (reference != 0) {
            cell.defined = true;
            cell.value = value / reference;
        }
        return cell;
    };
    auto make_row = [&](int year, int reference_year, const char* mode) {
        const auto& s = annual.at(year);
        const auto& r = annual.at(reference_year);
        AnnualRatioRow row;
        row.year = year;
        row.reference_year = reference_year;
        row.mode = mode;
        row.mean = ratio(s.mean, r.mean);
        row.median = ratio(s.median, r.median);
        row.sd = ratio(s.sd, r.sd);
        return row;
    };
    std::vector<AnnualRatioRow> rows;
    for (const auto& [year, stats] : annual) {
        (void)stats;
        if (annual.count(year - 1)) {
            rows.push_back(make_row(year, year - 1, "prior_year"));
        }
        if (year != baseline_year && annual.count(baseline_year)) {
            rows.push_back(make_row(year, baseline_year, "baseline"));
        }
    }
    return rows;
}

std::string sanitize_label(const std::string& label) {
    std::string out = label;
    for (char& c : out) {
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                           (c >= 'A' && c <= 'Z');
        if (!alnum) c = '_';
    }
    return out;
}

namespace {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LEADTIME_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw InputError("LEADTIME_LAB_THREADS must be a positive integer");
        }
        return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

int first_full_year(const std::set<YearMonth>& months) {
    std::map<int, std::set<int>> per_year;
    for (const auto& ym : months) per_year[ym.year].insert(ym.month);
    for (const auto& [year, present] : per_year) {
        if (present.size() == 12) return year;
    }
    return per_year.begin()->first;
}

MarketReport analyze_market(const std::vector<const MonthlyCohort*>& cohorts,
                            const AnalysisConfig& config, int baseline_year) {
    MarketReport rep;
    rep.market = cohorts.front()->market;

    for (const MonthlyCohort* c : cohorts) {
        auto dist = build_distribution(*c, config.lead_cap);
        rep.cohort_sizes[c->month] = c->bookings.size();
        rep.monthly_stats[c->month] =
            config.weighted_stats ? describe(dist) : describe_per_trip(*c);
        rep.distributions.emplace(c->month, std::move(dist));
    }

    std::map<int, MonthlyCohort> pooled;
    for (const MonthlyCohort* c : cohorts) {
        auto& p = pooled[c->month.year];
        p.month = YearMonth{c->month.year, 1};
        p.market = rep.market;
        p.bookings.insert(p.bookings.end(), c->bookings.begin(),
                          c->bookings.end());
    }
    for (const auto& [year, cohort] : pooled) {
        rep.annual_stats[year] =
            config.weighted_stats
                ? describe(build_distribution(cohort, config.lead_cap))
                : describe_per_trip(cohort);
    }
    rep.annual_ratios = annual_ratio_table(rep.annual_stats, baseline_year);
    for (const auto& [year, stats] : rep.annual_stats) {
        (void)stats;
        if (year != rep.annual_stats.begin()->first &&
            !rep.annual_stats.count(year - 1)) {
            rep.notes.push_back("annual ratios: no prior-year stats for " +
                                std::to_string(year));
        }
    }

    try {
        rep.yoy = yoy_series(rep.distributions);
    } catch (const ComputeError& e) {
        rep.notes.push_back(std::string("yoy skipped: ") + e.what());
    }
    try {
        rep.baseline = baseline_series(rep.distributions, baseline_year);
    } catch (const ComputeError& e) {
        rep.notes.push_back(std::string("baseline skipped: ") + e.what());
    }
    for (int h : config.partial_horizons) {
        try {
            auto series = partial_series(rep.distributions, h);
            for (const auto& p : early_warning(series, config.warn_threshold)) {
                rep.flags.push_back(EarlyWarningFlag{h, p.month, p.value});
            }
            rep.partials.push_back(std::move(series));
        } catch (const ComputeError& e) {
            rep.notes.push_back("partial" + std::to_string(h) +
                                " skipped: " + e.what());
        }
    }

    auto decompose = [&](const std::optional<DivergenceSeries>& series,
                         const char* name) -> std::optional<DecomposedSeries> {
        if (!series) return std::nullopt;
        const auto n = static_cast<int>(series->points.size());
        if (n < 2 * config.stl.period) {
            rep.notes.push_back(std::string("stl ") + name + " skipped: " +
                                std::to_string(n) + " months < 2 periods");
            return std::nullopt;
        }
        try {
            return decompose_divergence(*series, config.stl);
        } catch (const std::exception& e) {
            rep.notes.push_back(std::string("stl ") + name +
                                " skipped: " + e.what());
            return std::nullopt;
        }
    };
    rep.stl_yoy = decompose(rep.yoy, "yoy");
    rep.stl_baseline = decompose(rep.baseline, "baseline");

    if (rep.yoy && !rep.yoy->points.empty()) {
        const auto& points = rep.yoy->points;
        std::vector<std::pair<std::vector<double>, std::vector<double>>> history;
        for (const auto& p : points) {
            history.emplace_back(
                rep.distributions.at(YearMonth::from_index(p.month.index() - 12))
                    .mass,
                rep.distributions.at(p.month).mass);
        }
        rep.d_scenarios = estimate_D_scenarios(history);

        // Forecast the latest month with a year-earlier counterpart, using
        // the maximum divergence seen before that month. With no earlier
        // observation the evaluation month's own divergence stands in.
        const YearMonth target = points.back().month;
        double d_input = 0;
        bool have_prior = false;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            d_input = std::max(d_input, points[i].value);
            have_prior = true;
        }
        if (!have_prior) {
            d_input = points.back().value;
            rep.notes.push_back(
                "forecast bound uses the evaluation month's own divergence "
                "(no earlier year-over-year pair)");
        }
        MarketForecast fc;
        fc.month = target;
        fc.d_input = d_input;
        fc.b_total =
            static_cast<double>(rep.cohort_sizes.at(target));
        fc.sweep = evaluate_horizon_sweep(
            rep.distributions.at(YearMonth::from_index(target.index() - 12)),
            rep.distributions.at(target), fc.b_total, d_input);
        rep.forecast = std::move(fc);
    } else {
        rep.notes.push_back("forecast skipped: no year-over-year pair");
    }
    return rep;
}

CorrelationTable correlation_table(
    const std::vector<std::pair<std::string, const DivergenceSeries*>>& series,
    const std::string& mode) {
    CorrelationTable table;
    table.mode = mode;
    const std::size_t n = series.size();
    table.r.assign(n, std::vector<double>(n, 0));
    table.defined.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        table.labels.push_back(series[i].first);
        table.r[i][i] = 1;
        table.defined[i][i] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            try {
                const double r = correlate(*series[i].second, *series[k].second, 0);
                table.r[i][k] = table.r[k][i] = r;
                table.defined[i][k] = table.defined[k][i] = true;
            } catch (const ComputeError&) {
                // overlap < 3 months or a constant series; cell stays empty
            }
        }
    }
    return table;
}

} // namespace

ReportBundle run_analysis(const std::vector<BookingRecord>& records,
                          const AnalysisConfig& config,
                          const std::string& input_hash) {
    config.validate();
    GroupResult grouped = group_by_month(records, config.lead_cap);

    std::map<MarketKey, std::vector<const MonthlyCohort*>> by_market;
    for (const auto& cohort : grouped.cohorts) {
        if (!config.markets.empty() &&
            std::find(config.markets.begin(), config.markets.end(),
                      cohort.market) == config.markets.end()) {
            continue;
        }
        by_market[cohort.market].push_back(&cohort);
    }
    if (by_market.empty()) {
        if (!config.markets.empty()) {
            std::string labels;
            for (const auto& m : config.markets) {
                if (!labels.empty()) labels += ", ";
                labels += m.label();
            }
            throw InputError("no cohorts match the market filter: " + labels);
        }
        throw InputError("no cohorts in input");
    }

    std::set<YearMonth> months;
    for (const auto& [market, cohorts] : by_market) {
        (void)market;
        for (const MonthlyCohort* c : cohorts) months.insert(c->month);
    }

    ReportBundle bundle;
    bundle.config = config;
    bundle.baseline_year_used = config.baseline_year != 0
                                    ? config.baseline_year
                                    : first_full_year(months);
    bundle.input_records = records.size();
    bundle.excluded_over_cap = grouped.excluded_over_cap;
    bundle.input_hash = input_hash;

    std::vector<const std::vector<const MonthlyCohort*>*> market_cohorts;
    for (const auto& [market, cohorts] : by_market) {
        (void)market;
        market_cohorts.push_back(&cohorts);
    }
    bundle.markets.resize(market_cohorts.size());

    const int threads = std::min<int>(resolve_thread_count(config.threads),
                                      static_cast<int>(market_cohorts.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= market_cohorts.size()) return;
            try {
                bundle.markets[i] = analyze_market(*market_cohorts[i], config,
                                                   bundle.baseline_year_used);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (const char* mode : {"yoy", "baseline"}) {
        std::vector<std::pair<std::string, const DivergenceSeries*>> series;
        for (const auto& rep : bundle.markets) {
            const auto& opt =
                std::string(mode) == "yoy" ? rep.yoy : rep.baseline;
            if (opt && !opt->points.empty()) {
                series.emplace_back(rep.market.label(), &*opt);
            }
        }
        if (series.size() >= 2) {
            bundle.correlations.push_back(correlation_table(series, mode));
        }
    }
    return bundle;
}

namespace {

std::string ratio_cell_text(const RatioCell& cell) {
    return cell.defined ? format_double(cell.value) : std::string();
}

void append_stats_row(std::string& csv, const std::string& prefix,
                      const DescriptiveStats& stats) {
    csv += prefix;
    csv += ',';
    csv += format_double(stats.mean);
    csv += ',';
    csv += format_double(stats.median);
    csv += ',';
    csv += format_double(stats.sd);
    csv += ',';
    csv += stats.weighted ? "true" : "false";
    csv += '\n';
}

std::string market_columns(const MarketKey& m) {
    return m.city + "," + m.corridor + "," + m.travel_type;
}

nlohmann::ordered_json summary_json(const DivergenceSummary& s) {
    nlohmann::ordered_json out;
    out["max_D"] = s.max;
    out["mean_D"] = s.mean;
    nlohmann::ordered_json q;
    for (const auto& [key, value] : s.quantiles) q[key] = value;
    out["quantiles"] = q;
    return out;
}

} // namespace

std::vector<std::string> write_report_bundle(const ReportBundle& bundle,
                                             const std::string& output_dir) {
    std::vector<std::string> files;
    auto emit = [&](const std::string& rel, const std::string& content) {
        atomic_write_file(output_dir + "/" + rel, content);
        files.push_back(rel);
    };

    std::string monthly = "month,city,corridor,travel_type,mean,median,sd,weighted\n";
    std::string annual = "year,city,corridor,travel_type,mean,median,sd,weighted\n";
    std::string ratios =
        "city,corridor,travel_type,year,reference_year,mode,"
        "mean_ratio,median_ratio,sd_ratio\n";
    for (const auto& rep : bundle.markets) {
        const std::string cols = market_columns(rep.market);
        for (const auto& [month, stats] : rep.monthly_stats) {
            append_stats_row(monthly, format_year_month(month) + "," + cols, stats);
        }
        for (const auto& [year, stats] : rep.annual_stats) {
            append_stats_row(annual, std::to_string(year) + "," + cols, stats);
        }
        for (const auto& row : rep.annual_ratios) {
            ratios += cols;
            ratios += ',';
            ratios += std::to_string(row.year);
            ratios += ',';
            ratios += std::to_string(row.reference_year);
            ratios += ',';
            ratios += row.mode;
            ratios += ',';
            ratios += ratio_cell_text(row.mean);
            ratios += ',';
            ratios += ratio_cell_text(row.median);
            ratios += ',';
            ratios += ratio_cell_text(row.sd);
            ratios += '\n';
        }
    }
    emit("stats/monthly.csv", monthly);
    emit("stats/annual.csv", annual);
    emit("stats/annual_ratios.csv", ratios);

    std::string series_csv = "month,market,mode,value\n";
    std::string summary_csv = "market,mode,year,months,mean,median,q025,q975\n";
    auto append_series = [&](const MarketReport& rep,
                             const DivergenceSeries& series) {
        const std::string label = rep.market.label();
        const std::string mode = mode_name(series.mode, series.horizon);
        std::map<int, std::vector<double>> by_year;
        for (const auto& p : series.points) {
            series_csv += format_year_month(p.month);
            series_csv += ',';
            series_csv += label;
            series_csv += ',';
            series_csv += mode;
            series_csv += ',';
            series_csv += format_double(p.value);
            series_csv += '\n';
            by_year[p.month.year].push_back(p.value);
        }
        for (const auto& [year, values] : by_year) {
            double sum = 0;
            for (double v : values) sum += v;
            summary_csv += label;
            summary_csv += ',';
            summary_csv += mode;
            summary_csv += ',';
            summary_csv += std::to_string(year);
            summary_csv += ',';
            summary_csv += std::to_string(values.size());
            summary_csv += ',';
            summary_csv += format_double(sum / static_cast<double>(values.size()));
            summary_csv += ',';
            summary_csv += format_double(quantile_type7(values, 0.5));
            summary_csv += ',';
            summary_csv += format_double(quantile_type7(values, 0.025));
            summary_csv += ',';
            summary_csv += format_double(quantile_type7(values, 0.975));
            summary_csv += '\n';
        }
    };
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    for (const auto& rep : bundle.markets) {
        if (rep.yoy) append_series(rep, *rep.yoy);
        if (rep.baseline) append_series(rep, *rep.baseline);
        for (const auto& partial : rep.partials) append_series(rep, partial);
        for (const auto& flag : rep.flags) {
            nlohmann::ordered_json f;
            f["market"] = rep.market.label();
            f["horizon"] = flag.horizon;
            f["month"] = format_year_month(flag.month);
            f["value"] = flag.value;
            f["threshold"] = bundle.config.warn_threshold;
            flags.push_back(f);
        }
    }
    emit("divergence/series.csv", series_csv);
    emit("divergence/annual_summary.csv", summary_csv);
    emit("divergence/flags.json", flags.dump(2) + "\n");

    for (const auto& rep : bundle.markets) {
        const std::string safe = sanitize_label(rep.market.label());
        auto stl_csv = [](const DecomposedSeries& d) {
            std::string csv = "month,observed,trend,seasonal,remainder\n";
            for (std::size_t i = 0; i < d.months.size(); ++i) {
                csv += format_year_month(d.months[i]);
                csv += ',';
                csv += format_double(d.observed[i]);
                csv += ',';
                csv += format_double(d.components.trend[i]);
                csv += ',';
                csv += format_double(d.components.seasonal[i]);
                csv += ',';
                csv += format_double(d.components.remainder[i]);
                csv += '\n';
            }
            return csv;
        };
        if (rep.stl_yoy) emit("stl/yoy__" + safe + ".csv", stl_csv(*rep.stl_yoy));
        if (rep.stl_baseline) {
            emit("stl/baseline__" + safe + ".csv", stl_csv(*rep.stl_baseline));
        }
    }

    for (const auto& table : bundle.correlations) {
        std::string csv = "market";
        for (const auto& label : table.labels) csv += "," + label;
        csv += '\n';
        for (std::size_t i = 0; i < table.labels.size(); ++i) {
            csv += table.labels[i];
            for (std::size_t k = 0; k < table.labels.size(); ++k) {
                csv += ',';
                if (table.defined[i][k]) csv += format_double(table.r[i][k]);
            }
            csv += '\n';
        }
        emit("correlation/" + table.mode + ".csv", csv);
    }

    nlohmann::ordered_json scenarios;
    for (const auto& rep : bundle.markets) {
        if (rep.forecast) {
            emit("forecast/" + sanitize_label(rep.market.label()) + ".csv",
                 sweep_csv_text(rep.forecast->sweep));
        }
        if (rep.d_scenarios) {
            scenarios[rep.market.label()] = summary_json(*rep.d_scenarios);
        }
    }
    emit("forecast/d_scenarios.json", scenarios.dump(2) + "\n");

    nlohmann::ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["fixture_hash"] = fixture_hash();
    manifest["input"] = {{"records", bundle.input_records},
                         {"excluded_over_cap", bundle.excluded_over_cap},
                         {"hash", bundle.input_hash}};
    manifest["baseline_year"] = bundle.baseline_year_used;
    nlohmann::ordered_json config;
    config["lead_cap"] = bundle.config.lead_cap;
    config["baseline_year"] = bundle.config.baseline_year;
    config["weighted_stats"] = bundle.config.weighted_stats;
    config["partial_horizons"] = bundle.config.partial_horizons;
    config["warn_threshold"] = bundle.config.warn_threshold;
    config["stl"] = {{"period", bundle.config.stl.period},
                     {"seasonal_window", bundle.config.stl.seasonal_window},
                     {"trend_window", bundle.config.stl.trend_window},
                     {"low_pass_window", bundle.config.stl.low_pass_window},
                     {"inner_iterations", bundle.config.stl.inner_iterations},
                     {"outer_iterations", bundle.config.stl.outer_iterations}};
    nlohmann::ordered_json filter = nlohmann::ordered_json::array();
    for (const auto& m : bundle.config.markets) filter.push_back(m.label());
    config["markets"] = filter;
    config["threads"] = bundle.config.threads;
    manifest["config"] = config;
    nlohmann::ordered_json market_list = nlohmann::ordered_json::array();
    for (const auto& rep : bundle.markets) market_list.push_back(rep.market.label());
    manifest["markets"] = market_list;
    nlohmann::ordered_json notes;
    for (const auto& rep : bundle.markets) {
        if (!rep.notes.empty()) notes[rep.market.label()] = rep.notes;
    }
    manifest["notes"] = notes;
    manifest["files"] = files;
    atomic_write_file(output_dir + "/manifest.json", manifest.dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
}

} // namespace leadtime
