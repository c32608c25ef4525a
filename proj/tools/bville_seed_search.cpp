// Scans perturbation seeds for ones whose perturbed year keeps the
// fixture's published bands with margin to spare: |mean change| < 5%,
// median unchanged at 8, |sd change| < 6%, L1 in [0.18, 0.25], and a
// 10-15% pickup underestimate at elapsed index 17. Runs the exact
// production code path (bville_base -> perturb_distribution -> stats),
// so the winning seed can be pinned as kBvilleSeed verbatim.
//
// Usage: bville-seed-search [--start S] [--count N] [--threads T] [--top K]

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "leadtime/distribution.hpp"
#include "leadtime/divergence.hpp"
#include "leadtime/simulate.hpp"
#include "leadtime/stats.hpp"

namespace {

using namespace leadtime;

struct Hit {
    std::uint64_t seed = 0;
    double mean_change = 0; // relative
    double sd_change = 0;   // relative
    double l1 = 0;
    double eps17 = 0; // relative pickup error at elapsed index 17
    double cum7 = 0;  // perturbed cumulative mass through lead 7 (< 0.5 keeps median)
    double cum8 = 0;  // through lead 8 (>= 0.5 keeps median)
    double margin = 0;
};

// Normalized distance to the nearest band edge; 1 = band center, 0 = edge.
double band_margin(double value, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double center = 0.5 * (hi + lo);
    return 1.0 - std::abs(value - center) / half;
}

struct Evaluator {
    std::vector<double> base;
    DescriptiveStats base_stats;
    double c_hist_17 = 0;

    Evaluator() {
        base = bville_base();
        base_stats = weighted_stats_from_mass(base, 1);
        double c = 0;
        for (int i = 0; i < 17; ++i) c += base[static_cast<std::size_t>(i)];
        c_hist_17 = c;
    }

    std::optional<Hit> evaluate(std::uint64_t seed) const {
        const auto perturbed =
            perturb_distribution(base, PerturbationSpec{0.05, seed, 30});

        Hit h;
        h.seed = seed;
        double cum = 0, c_act_17 = 0, mean = 0;
        for (int i = 0; i < 30; ++i) {
            const double m = perturbed[static_cast<std::size_t>(i)];
            mean += (i + 1.0) * m;
            cum += m;
            if (i == 6) h.cum7 = cum;
            if (i == 7) h.cum8 = cum;
            if (i == 16) c_act_17 = cum;
        }
        if (h.cum7 >= 0.5 || h.cum8 < 0.5) return std::nullopt; // median moved
        h.mean_change = mean / base_stats.mean - 1.0;
        if (std::abs(h.mean_change) >= 0.05) return std::nullopt;

        const auto stats = weighted_stats_from_mass(perturbed, 1);
        h.sd_change = stats.sd / base_stats.sd - 1.0;
        if (std::abs(h.sd_change) >= 0.06) return std::nullopt;

        h.l1 = l1_distance(base, perturbed);
        if (h.l1 < 0.18 || h.l1 > 0.25) return std::nullopt;

        h.eps17 = c_act_17 / c_hist_17 - 1.0;
        if (h.eps17 < -0.15 || h.eps17 > -0.10) return std::nullopt;

        h.margin = std::min({band_margin(h.mean_change, -0.05, 0.05),
                             std::min(0.5 - h.cum7, h.cum8 - 0.5) / 0.05,
                             band_margin(h.sd_change, -0.06, 0.06),
                             band_margin(h.l1, 0.18, 0.25),
                             band_margin(h.eps17, -0.15, -0.10)});
        return h;
    }
};

} // namespace

int main(int argc, char** argv) {
    std::uint64_t start = 0;
    std::uint64_t count = 100'000'000;
    unsigned threads = std::thread::hardware_concurrency();
    std::size_t top = 20;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const char* value = argv[i + 1];
        if (flag == "--start") start = std::strtoull(value, nullptr, 10);
        else if (flag == "--count") count = std::strtoull(value, nullptr, 10);
        else if (flag == "--threads") threads = static_cast<unsigned>(std::atoi(value));
        else if (flag == "--top") top = static_cast<std::size_t>(std::atoi(value));
        else {
            std::fprintf(stderr, "unknown flag %s\n", flag.c_str());
            return 1;
        }
    }
    if (threads == 0) threads = 1;

    const Evaluator ev;
    std::printf("base: mean=%.6f median=%.0f sd=%.6f C_hist(17)=%.6f\n",
                ev.base_stats.mean, ev.base_stats.median, ev.base_stats.sd,
                ev.c_hist_17);

    std::atomic<std::uint64_t> next{start};
    const std::uint64_t end = start + count;
    constexpr std::uint64_t kChunk = 65536;
    std::mutex hits_mutex;
    std::vector<Hit> hits;

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t lo = next.fetch_add(kChunk);
                if (lo >= end) return;
                const std::uint64_t hi = std::min(lo + kChunk, end);
                for (std::uint64_t seed = lo; seed < hi; ++seed) {
                    if (auto hit = ev.evaluate(seed)) {
                        std::lock_guard<std::mutex> lock(hits_mutex);
                        hits.push_back(*hit);
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.margin > b.margin || (a.margin == b.margin && a.seed < b.seed);
    });
    std::printf("searched %llu seeds in [%llu, %llu): %zu passed all bands\n",
                static_cast<unsigned long long>(count),
                static_cast<unsigned long long>(start),
                static_cast<unsigned long long>(end), hits.size());
    std::printf("%4s %12s %8s %8s %8s %8s %7s %7s %7s\n", "rank", "seed",
                "dmean%", "dsd%", "l1", "eps17", "cum7", "cum8", "margin");
    for (std::size_t i = 0; i < std::min(top, hits.size()); ++i) {
        const Hit& h = hits[i];
        std::printf("%4zu %12llu %+8.3f %+8.3f %8.4f %8.4f %7.4f %7.4f %7.4f\n",
                    i + 1, static_cast<unsigned long long>(h.seed),
                    100 * h.mean_change, 100 * h.sd_change, h.l1, h.eps17,
                    h.cum7, h.cum8, h.margin);
    }
    return 0;
}
