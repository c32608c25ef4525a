#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadtime/distribution.hpp"
#include "leadtime/divergence.hpp"
#include "leadtime/ingest.hpp"
#include "leadtime/pickup.hpp"
#include "leadtime/records.hpp"
#include "leadtime/stats.hpp"
#include "leadtime/stl.hpp"

namespace leadtime {

// End-to-end analysis settings. Parsed from JSON by parse_analysis_config;
// every field has a usable default.
struct AnalysisConfig {
    int lead_cap = 365;
    int baseline_year = 0; // 0 = first calendar year fully covered by the data
    bool weighted_stats = true; // false = per-trip stats
    std::vector<int> partial_horizons = {30};
    double warn_threshold = 0.1;
    StlParams stl;
    std::vector<MarketKey> markets; // empty = every market in the input
    int threads = 0; // 0 = LEADTIME_LAB_THREADS, else hardware default

    void validate() const;
};

AnalysisConfig parse_analysis_config(const std::string& json_text);

// Year-over-year or vs-baseline ratio of annual statistics. A cell is
// undefined when the reference statistic is zero.
struct RatioCell {
    bool defined = false;
    double value = 0;
};

struct AnnualRatioRow {
    int year = 0;
    int reference_year = 0;
    std::string mode; // "prior_year" | "baseline"
    RatioCell mean, median, sd;
};

std::vector<AnnualRatioRow> annual_ratio_table(
    const std::map<int, DescriptiveStats>& annual, int baseline_year);

struct MarketForecast {
    YearMonth month;    // cohort being forecast; reference is month - 12
    double d_input = 0; // divergence fed into the error bound
    double b_total = 0;
    std::vector<ForecastEvaluation> sweep;
};

struct EarlyWarningFlag {
    int horizon = 0;
    YearMonth month;
    double value = 0;
};

struct MarketReport {
    MarketKey market;
    std::map<YearMonth, LeadTimeDistribution> distributions;
    std::map<YearMonth, std::size_t> cohort_sizes; // bookings per month
    std::map<YearMonth, DescriptiveStats> monthly_stats;
    std::map<int, DescriptiveStats> annual_stats; // year pooled across months
    std::vector<AnnualRatioRow> annual_ratios;
    std::optional<DivergenceSeries> yoy;
    std::optional<DivergenceSeries> baseline;
    std::vector<DivergenceSeries> partials; // one per configured horizon
    std::vector<EarlyWarningFlag> flags;
    std::optional<DecomposedSeries> stl_yoy;
    std::optional<DecomposedSeries> stl_baseline;
    std::optional<MarketForecast> forecast;
    std::optional<DivergenceSummary> d_scenarios;
    std::vector<std::string> notes; // sub-analyses skipped, and why
};

struct CorrelationTable {
    std::string mode; // "yoy" | "baseline"
    std::vector<std::string> labels;
    std::vector<std::vector<double>> r;
    std::vector<std::vector<bool>> defined; // false: overlap < 3 or no variance
};

struct ReportBundle {
    AnalysisConfig config;
    int baseline_year_used = 0;
    std::size_t input_records = 0;
    std::size_t excluded_over_cap = 0;
    std::string input_hash; // FNV-1a64 over the raw input bytes, hex
    std::vector<MarketReport> markets; // sorted by market key
    std::vector<CorrelationTable> correlations;
};

// Runs the full per-market analysis. Markets are processed in parallel
// (config.threads); every sub-result equals the underlying module call.
ReportBundle run_analysis(const std::vector<BookingRecord>& records,
                          const AnalysisConfig& config,
                          const std::string& input_hash);

// Writes the bundle under output_dir (stats/, divergence/, stl/,
// correlation/, forecast/, manifest.json). Returns the relative paths
// written, in write order. Output is deterministic: no timestamps, fixed
// ordering, shortest round-trip number formatting.
std::vector<std::string> write_report_bundle(const ReportBundle& bundle,
                                             const std::string& output_dir);

// "city/corridor/travel_type" with every non-alphanumeric byte replaced by
// '_', for filenames.
std::string sanitize_label(const std::string& label);

} // namespace leadtime
