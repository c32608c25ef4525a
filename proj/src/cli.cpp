#include "leadtime/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "leadtime/distribution.hpp"
#include "leadtime/divergence.hpp"
#include "leadtime/errors.hpp"
#include "leadtime/ingest.hpp"
#include "leadtime/io.hpp"
#include "leadtime/pickup.hpp"
#include "leadtime/pipeline.hpp"
#include "leadtime/simulate.hpp"
#include "leadtime/stl.hpp"
#include "leadtime/version.hpp"

namespace leadtime {

namespace {

void emit_error(std::ostream& err, const char* kind, const std::string& message,
                bool json) {
    if (json) {
        err << "{\"error\":\"" << kind << "\",\"message\":"
            << nlohmann::json(message).dump() << "}\n";
    } else {
        err << "error: " << message << '\n';
    }
}

std::string hash_hex(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return std::string(buf);
}

MarketKey parse_market_label(const std::string& label) {
    const auto last = label.rfind('/');
    const auto mid = last == std::string::npos ? std::string::npos
                                               : label.rfind('/', last - 1);
    if (mid == std::string::npos || mid == 0) {
        throw InputError("market label must be city/corridor/travel_type, got '" +
                         label + "'");
    }
    return MarketKey{label.substr(0, mid), label.substr(mid + 1, last - mid - 1),
                     label.substr(last + 1)};
}

std::vector<MonthlyCohort> load_cohorts(const std::string& path, int lead_cap) {
    const auto parsed = parse_bookings_text(read_file(path), ParseMode::strict);
    return group_by_month(parsed.records, lead_cap).cohorts;
}

std::map<MarketKey, std::map<YearMonth, LeadTimeDistribution>> distributions_by_market(
    const std::vector<MonthlyCohort>& cohorts, int lead_cap,
    const std::string& market_label) {
    std::map<MarketKey, std::map<YearMonth, LeadTimeDistribution>> out;
    MarketKey filter;
    if (!market_label.empty()) filter = parse_market_label(market_label);
    for (const auto& cohort : cohorts) {
        if (!market_label.empty() && cohort.market != filter) continue;
        out[cohort.market].emplace(cohort.month,
                                   build_distribution(cohort, lead_cap));
    }
    if (out.empty()) {
        throw InputError(market_label.empty()
                             ? std::string("no cohorts in input")
                             : "market not found: " + market_label);
    }
    return out;
}

DivergenceSeries series_for_mode(
    const std::map<YearMonth, LeadTimeDistribution>& dists,
    const std::string& mode, int baseline_year, int horizon) {
    if (mode == "yoy") return yoy_series(dists);
    if (mode == "baseline") {
        if (baseline_year == 0) {
            throw InputError("--baseline-year is required for baseline mode");
        }
        return baseline_series(dists, baseline_year);
    }
    if (mode == "partial") {
        if (horizon <= 0) throw InputError("--horizon is required for partial mode");
        return partial_series(dists, horizon);
    }
    throw InputError("unknown mode '" + mode + "' (expected yoy, baseline, partial)");
}

void append_series_rows(std::string& csv, const DivergenceSeries& series) {
    const std::string label = series.market.label();
    const std::string mode = mode_name(series.mode, series.horizon);
    for (const auto& p : series.points) {
        csv += format_year_month(p.month);
        csv += ',';
        csv += label;
        csv += ',';
        csv += mode;
        csv += ',';
        csv += format_double(p.value);
        csv += '\n';
    }
}

void write_or_print(std::ostream& out, const std::string& output_path,
                    const std::string& content) {
    if (output_path.empty()) {
        out << content;
    } else {
        atomic_write_file(output_path, content);
    }
}

std::string stats_json_line(const YearMonth& month, const MarketKey& market,
                            const DescriptiveStats& s) {
    std::string j = "{\"month\":\"";
    j += format_year_month(month);
    j += "\",\"market\":\"";
    j += market.label();
    j += "\",\"mean\":";
    j += format_sig6(s.mean);
    j += ",\"median\":";
    j += format_sig6(s.median);
    j += ",\"sd\":";
    j += format_sig6(s.sd);
    j += ",\"weighted\":";
    j += s.weighted ? "true" : "false";
    j += '}';
    return j;
}

// Mass CSVs may start at any delta; pickup math runs on lead-0-indexed
// vectors, so leading bins are zero-filled.
std::vector<double> lead_indexed(const MassCsv& m, const char* which) {
    if (m.first_delta < 0) {
        throw InputError(std::string(which) + ": negative lead times");
    }
    std::vector<double> v(static_cast<std::size_t>(m.first_delta), 0.0);
    v.insert(v.end(), m.mass.begin(), m.mass.end());
    if (!is_normalized(v)) {
        throw InputError(std::string(which) + ": mass does not sum to 1");
    }
    return v;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Booking lead-time distribution analytics"};
    app.name("leadtime-lab");
    app.require_subcommand(0, 1);
    bool json_errors = false;
    app.add_flag("--json-errors", json_errors,
                 "Write errors to stderr as JSON objects");
    bool show_version = false;
    app.add_flag("--version", show_version, "Print version and fixture hash");

    std::vector<std::pair<const CLI::App*, std::function<int()>>> handlers;

    // ingest-check
    struct {
        std::string input;
        int lead_cap = 365;
        bool lenient = false;
    } ingest_opts;
    auto* ingest = app.add_subcommand(
        "ingest-check", "Validate a bookings CSV and print an exclusion report");
    ingest->add_option("--input", ingest_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--lead-cap", ingest_opts.lead_cap,
                       "Maximum lead time in days")->capture_default_str();
    ingest->add_flag("--lenient", ingest_opts.lenient,
                     "Skip bad rows and report them instead of failing");
    handlers.emplace_back(ingest, [&] {
        const auto parsed = parse_bookings_text(
            read_file(ingest_opts.input),
            ingest_opts.lenient ? ParseMode::lenient : ParseMode::strict);
        const auto grouped = group_by_month(parsed.records, ingest_opts.lead_cap);
        out << exclusion_report_json(parsed.records.size() + parsed.errors.size(),
                                     parsed, grouped)
            << '\n';
        return 0;
    });

    // describe
    struct {
        std::string input;
        int lead_cap = 365;
        bool per_trip = false;
        std::string month;
        std::string market;
        std::string export_mass;
    } describe_opts;
    auto* describe_cmd = app.add_subcommand(
        "describe", "Per-cohort lead-time statistics as JSON lines");
    describe_cmd->add_option("--input", describe_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    describe_cmd->add_option("--lead-cap", describe_opts.lead_cap,
                             "Maximum lead time in days")->capture_default_str();
    describe_cmd->add_flag("--per-trip", describe_opts.per_trip,
                           "Per-trip statistics instead of nights-weighted");
    describe_cmd->add_option("--month", describe_opts.month,
                             "Only this check-in month (YYYY-MM)");
    describe_cmd->add_option("--market", describe_opts.market,
                             "Only this market (city/corridor/travel_type)");
    describe_cmd->add_option("--export-mass", describe_opts.export_mass,
                             "Directory for per-cohort delta,mass CSVs");
    handlers.emplace_back(describe_cmd, [&] {
        const auto cohorts =
            load_cohorts(describe_opts.input, describe_opts.lead_cap);
        MarketKey market_filter;
        if (!describe_opts.market.empty()) {
            market_filter = parse_market_label(describe_opts.market);
        }
        YearMonth month_filter{};
        if (!describe_opts.month.empty()) {
            month_filter = parse_year_month(describe_opts.month);
        }
        bool matched = false;
        for (const auto& cohort : cohorts) {
            if (!describe_opts.market.empty() && cohort.market != market_filter) {
                continue;
            }
            if (!describe_opts.month.empty() && cohort.month != month_filter) {
                continue;
            }
            matched = true;
            const auto dist = build_distribution(cohort, describe_opts.lead_cap);
            const auto stats = describe_opts.per_trip ? describe_per_trip(cohort)
                                                      : describe(dist);
            out << stats_json_line(cohort.month, cohort.market, stats) << '\n';
            if (!describe_opts.export_mass.empty()) {
                atomic_write_file(describe_opts.export_mass + "/" +
                                      format_year_month(cohort.month) + "__" +
                                      sanitize_label(cohort.market.label()) +
                                      ".csv",
                                  mass_csv_text(dist.mass, 0));
            }
        }
        if (!matched) throw InputError("no cohorts match the given filters");
        return 0;
    });

    // divergence
    struct {
        std::string input;
        std::string mode = "yoy";
        int baseline_year = 0;
        int horizon = 0;
        int lead_cap = 365;
        std::string market;
        std::string output;
    } div_opts;
    auto* div_cmd = app.add_subcommand(
        "divergence", "Month-over-reference divergence series as CSV");
    div_cmd->add_option("--input", div_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    div_cmd->add_option("--mode", div_opts.mode, "yoy | baseline | partial")->capture_default_str();
    div_cmd->add_option("--baseline-year", div_opts.baseline_year,
                        "Reference year for baseline mode");
    div_cmd->add_option("--horizon", div_opts.horizon,
                        "Truncation horizon for partial mode");
    div_cmd->add_option("--lead-cap", div_opts.lead_cap,
                        "Maximum lead time in days")->capture_default_str();
    div_cmd->add_option("--market", div_opts.market, "Only this market");
    div_cmd->add_option("--output", div_opts.output, "Output CSV path");
    handlers.emplace_back(div_cmd, [&] {
        const auto by_market = distributions_by_market(
            load_cohorts(div_opts.input, div_opts.lead_cap), div_opts.lead_cap,
            div_opts.market);
        std::string csv = "month,market,mode,value\n";
        for (const auto& [market, dists] : by_market) {
            (void)market;
            append_series_rows(csv,
                               series_for_mode(dists, div_opts.mode,
                                               div_opts.baseline_year,
                                               div_opts.horizon));
        }
        write_or_print(out, div_opts.output, csv);
        return 0;
    });

    // stl
    struct {
        std::string input;
        std::string mode = "yoy";
        int baseline_year = 0;
        int lead_cap = 365;
        std::string market;
        std::string output;
        StlParams params;
    } stl_opts;
    auto* stl_cmd = app.add_subcommand(
        "stl", "Decompose a divergence series into trend/seasonal/remainder");
    stl_cmd->add_option("--input", stl_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    stl_cmd->add_option("--mode", stl_opts.mode, "yoy | baseline")->capture_default_str();
    stl_cmd->add_option("--baseline-year", stl_opts.baseline_year,
                        "Reference year for baseline mode");
    stl_cmd->add_option("--lead-cap", stl_opts.lead_cap,
                        "Maximum lead time in days")->capture_default_str();
    stl_cmd->add_option("--market", stl_opts.market,
                        "Market to decompose (required with several markets)");
    stl_cmd->add_option("--output", stl_opts.output, "Output CSV path");
    stl_cmd->add_option("--period", stl_opts.params.period, "Season length")->capture_default_str();
    stl_cmd->add_option("--seasonal-window", stl_opts.params.seasonal_window,
                        "Seasonal loess window (0 = periodic)")->capture_default_str();
    stl_cmd->add_option("--trend-window", stl_opts.params.trend_window,
                        "Trend loess window (0 = derived)")->capture_default_str();
    stl_cmd->add_option("--low-pass-window", stl_opts.params.low_pass_window,
                        "Low-pass loess window (0 = derived)")->capture_default_str();
    stl_cmd->add_option("--inner", stl_opts.params.inner_iterations,
                        "Inner loop passes")->capture_default_str();
    stl_cmd->add_option("--outer", stl_opts.params.outer_iterations,
                        "Robustness passes")->capture_default_str();
    handlers.emplace_back(stl_cmd, [&] {
        if (stl_opts.mode != "yoy" && stl_opts.mode != "baseline") {
            throw InputError("stl decomposes yoy or baseline series");
        }
        const auto by_market = distributions_by_market(
            load_cohorts(stl_opts.input, stl_opts.lead_cap), stl_opts.lead_cap,
            stl_opts.market);
        if (by_market.size() > 1) {
            throw InputError("input has " + std::to_string(by_market.size()) +
                             " markets; pass --market");
        }
        const auto series =
            series_for_mode(by_market.begin()->second, stl_opts.mode,
                            stl_opts.baseline_year, 0);
        const auto d = decompose_divergence(series, stl_opts.params);
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
        write_or_print(out, stl_opts.output, csv);
        return 0;
    });

    // pickup
    struct {
        std::string hist;
        std::string actual;
        double total = 0;
        double d = 0;
        std::string output;
    } pickup_opts;
    auto* pickup_cmd = app.add_subcommand(
        "pickup", "Booking-window sweep of forecast, error, and bound");
    pickup_cmd->add_option("--hist", pickup_opts.hist, "Historical delta,mass CSV")
        ->required()
        ->check(CLI::ExistingFile);
    pickup_cmd->add_option("--actual", pickup_opts.actual, "Actual delta,mass CSV")
        ->required()
        ->check(CLI::ExistingFile);
    pickup_cmd->add_option("--total", pickup_opts.total, "Actual total bookings")
        ->required();
    pickup_cmd->add_option("--d", pickup_opts.d,
                           "Divergence scenario for the error bound")->capture_default_str();
    pickup_cmd->add_option("--output", pickup_opts.output, "Output CSV path");
    handlers.emplace_back(pickup_cmd, [&] {
        const auto hist = lead_indexed(read_mass_csv(pickup_opts.hist), "hist");
        const auto actual =
            lead_indexed(read_mass_csv(pickup_opts.actual), "actual");
        if (hist.size() != actual.size()) {
            throw InputError("hist and actual cover different lead-time ranges");
        }
        const auto sweep = evaluate_horizon_sweep(hist, actual, pickup_opts.total,
                                                  pickup_opts.d);
        write_or_print(out, pickup_opts.output, sweep_csv_text(sweep));
        return 0;
    });

    // bound
    struct {
        double d = 0;
        int delta = 0;
        int delta_max = 0;
        double c_hist = 0;
    } bound_opts;
    auto* bound_cmd =
        app.add_subcommand("bound", "Worst-case relative forecast error");
    bound_cmd->add_option("--d", bound_opts.d, "Distribution divergence")
        ->required();
    bound_cmd->add_option("--delta", bound_opts.delta, "Elapsed window position")
        ->required();
    bound_cmd->add_option("--delta-max", bound_opts.delta_max, "Window length")
        ->required();
    bound_cmd->add_option("--c-hist", bound_opts.c_hist,
                          "Historical cumulative fraction")
        ->required();
    handlers.emplace_back(bound_cmd, [&] {
        out << format_sig6(error_bound(bound_opts.d, bound_opts.delta,
                                       bound_opts.delta_max, bound_opts.c_hist))
            << '\n';
        return 0;
    });

    // simulate
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Generate seeded fixtures and scenarios");
    simulate_cmd->require_subcommand(1);

    struct {
        std::uint64_t seed = 0;
        std::string output = ".";
    } bville_opts;
    auto* bville_cmd = simulate_cmd->add_subcommand(
        "bville", "Two-year perturbed market fixture");
    bville_cmd->add_option("--seed", bville_opts.seed, "Perturbation seed")
        ->required();
    bville_cmd->add_option("--output", bville_opts.output,
                           "Directory for the mass CSVs")->capture_default_str();
    handlers.emplace_back(bville_cmd, [&] {
        const auto fx = make_bville_fixture(bville_opts.seed);
        atomic_write_file(bville_opts.output + "/bville_2019.csv",
                          mass_csv_text(fx.dist_2019, 1));
        atomic_write_file(bville_opts.output + "/bville_2020.csv",
                          mass_csv_text(fx.dist_2020, 1));
        const auto s19 = weighted_stats_from_mass(fx.dist_2019, 1);
        const auto s20 = weighted_stats_from_mass(fx.dist_2020, 1);
        out << "{\"seed\":\"" << bville_opts.seed << "\",\"mean_2019\":"
            << format_sig6(s19.mean) << ",\"median_2019\":"
            << format_sig6(s19.median) << ",\"sd_2019\":" << format_sig6(s19.sd)
            << ",\"mean_2020\":" << format_sig6(s20.mean) << ",\"median_2020\":"
            << format_sig6(s20.median) << ",\"sd_2020\":" << format_sig6(s20.sd)
            << ",\"l1\":" << format_sig6(l1_distance(fx.dist_2019, fx.dist_2020))
            << ",\"bookings_2019\":" << format_sig6(fx.bookings_2019)
            << ",\"bookings_2020\":" << format_sig6(fx.bookings_2020)
            << ",\"files\":[\"bville_2019.csv\",\"bville_2020.csv\"]}" << '\n';
        return 0;
    });

    struct {
        std::string output = ".";
    } figure1_opts;
    auto* figure1_cmd = simulate_cmd->add_subcommand(
        "figure1", "Equal-moment unimodal/bimodal pair (deterministic)");
    figure1_cmd->add_option("--output", figure1_opts.output,
                            "Directory for the mass CSVs")->capture_default_str();
    handlers.emplace_back(figure1_cmd, [&] {
        const auto [a, b] = make_figure1_pair();
        atomic_write_file(figure1_opts.output + "/figure1_a.csv",
                          mass_csv_text(a, 0));
        atomic_write_file(figure1_opts.output + "/figure1_b.csv",
                          mass_csv_text(b, 0));
        const auto sa = weighted_stats_from_mass(a, 0);
        const auto sb = weighted_stats_from_mass(b, 0);
        out << "{\"mean_a\":" << format_sig6(sa.mean) << ",\"sd_a\":"
            << format_sig6(sa.sd) << ",\"mean_b\":" << format_sig6(sb.mean)
            << ",\"sd_b\":" << format_sig6(sb.sd) << ",\"l1\":"
            << format_sig6(l1_distance(a, b))
            << ",\"files\":[\"figure1_a.csv\",\"figure1_b.csv\"]}" << '\n';
        return 0;
    });

    struct {
        std::string spec;
        std::uint64_t seed = 0;
        std::string output;
    } scenario_opts;
    auto* scenario_cmd = simulate_cmd->add_subcommand(
        "scenario", "Booking stream from a JSON scenario spec");
    scenario_cmd->add_option("--spec", scenario_opts.spec, "Scenario spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    scenario_cmd->add_option("--seed", scenario_opts.seed,
                             "Overrides the spec's seed");
    scenario_cmd->add_option("--output", scenario_opts.output,
                             "Bookings CSV path (default: stdout)");
    handlers.emplace_back(scenario_cmd, [&] {
        auto spec = parse_scenario_spec(read_file(scenario_opts.spec));
        if (scenario_cmd->count("--seed") > 0) {
            spec.seed = scenario_opts.seed;
            spec.seed_set = true;
        }
        if (!spec.seed_set) {
            throw InputError(
                "scenario requires a seed (--seed or \"seed\" in the spec)");
        }
        write_or_print(out, scenario_opts.output,
                       bookings_csv_text(generate_scenario(spec)));
        return 0;
    });

    // monitor
    struct {
        std::string input;
        int horizon = 30;
        double threshold = 0.1;
        int lead_cap = 365;
        std::string market;
    } monitor_opts;
    auto* monitor_cmd = app.add_subcommand(
        "monitor", "Flag months whose partial divergence exceeds a threshold");
    monitor_cmd->add_option("--input", monitor_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    monitor_cmd->add_option("--horizon", monitor_opts.horizon,
                            "Partial-distribution horizon in days")->capture_default_str();
    monitor_cmd->add_option("--threshold", monitor_opts.threshold,
                            "Divergence alert threshold")->capture_default_str();
    monitor_cmd->add_option("--lead-cap", monitor_opts.lead_cap,
                            "Maximum lead time in days")->capture_default_str();
    monitor_cmd->add_option("--market", monitor_opts.market, "Only this market");
    handlers.emplace_back(monitor_cmd, [&] {
        const auto by_market = distributions_by_market(
            load_cohorts(monitor_opts.input, monitor_opts.lead_cap),
            monitor_opts.lead_cap, monitor_opts.market);
        std::string body;
        for (const auto& [market, dists] : by_market) {
            const auto series = partial_series(dists, monitor_opts.horizon);
            for (const auto& flag :
                 early_warning(series, monitor_opts.threshold)) {
                if (!body.empty()) body += ",\n  ";
                body += "{\"market\":\"" + market.label() + "\",\"horizon\":" +
                        std::to_string(monitor_opts.horizon) + ",\"month\":\"" +
                        format_year_month(flag.month) + "\",\"value\":" +
                        format_sig6(flag.value) + ",\"threshold\":" +
                        format_sig6(monitor_opts.threshold) + "}";
            }
        }
        if (body.empty()) {
            out << "[]\n";
        } else {
            out << "[\n  " << body << "\n]\n";
        }
        return 0;
    });

    // analyze
    struct {
        std::string input;
        std::string config;
        std::string output;
        int threads = 0;
    } analyze_opts;
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "Full report bundle: stats, divergence, stl, forecasts");
    analyze_cmd->add_option("--input", analyze_opts.input, "Bookings CSV")
        ->required()
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--config", analyze_opts.config,
                            "Analysis config JSON")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--output", analyze_opts.output, "Bundle directory")
        ->required();
    analyze_cmd->add_option("--threads", analyze_opts.threads,
                            "Worker threads (0 = auto)");
    handlers.emplace_back(analyze_cmd, [&] {
        const std::string text = read_file(analyze_opts.input);
        const auto parsed = parse_bookings_text(text, ParseMode::strict);
        AnalysisConfig config;
        if (!analyze_opts.config.empty()) {
            config = parse_analysis_config(read_file(analyze_opts.config));
        }
        if (analyze_cmd->count("--threads") > 0) {
            config.threads = analyze_opts.threads;
        }
        const auto bundle = run_analysis(parsed.records, config, hash_hex(text));
        for (const auto& file :
             write_report_bundle(bundle, analyze_opts.output)) {
            out << file << '\n';
        }
        return 0;
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        if (json_errors ||
            std::find(args.begin(), args.end(), "--json-errors") != args.end()) {
            emit_error(err, "input", e.what(), true);
            return 1;
        }
        app.exit(e, out, err);
        return 1;
    }

    if (show_version) {
        out << "leadtime-lab " << kVersion << " (fixtures " << fixture_hash()
            << ")\n";
        return 0;
    }
    for (const auto& [cmd, handler] : handlers) {
        if (cmd->parsed()) return handler();
    }
    err << app.help();
    return 1;
}

} // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    const bool json_errors =
        std::find(args.begin(), args.end(), "--json-errors") != args.end();
    try {
        return run_cli(std::move(args), out, err);
    } catch (const InputError& e) {
        emit_error(err, "input", e.what(), json_errors);
        return 1;
    } catch (const ComputeError& e) {
        emit_error(err, "compute", e.what(), json_errors);
        return 2;
    } catch (const std::exception& e) {
        emit_error(err, "compute", e.what(), json_errors);
        return 2;
    }
}

} // namespace leadtime
