// Monte Carlo calibration of the critical values used by adf_stationarity:
// simulates the constant-only unit-root t-statistic under a pure random-walk
// null and prints the 1/5/10% quantiles per series length. The table in
// src/series.cpp was produced by this program with its defaults.
//
//   adf-calibrate [replicates] [seed] [max_lag]

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "csig/numstat.hpp"
#include "csig/series.hpp"

int main(int argc, char** argv) {
    const std::size_t replicates = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 424242;
    const int max_lag = argc > 3 ? std::atoi(argv[3]) : 1;

    std::printf("replicates=%zu seed=%llu max_lag=%d\n", replicates,
                static_cast<unsigned long long>(seed), max_lag);
    std::printf("%6s %10s %10s %10s\n", "n", "1%", "5%", "10%");

    for (const std::size_t n : {250u, 500u, 1000u}) {
        std::vector<double> stats;
        stats.reserve(replicates);
        std::vector<double> path(n);
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            csig::RandomSource rng(seed, rep);
            double level = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                level += rng.standard_normal();
                path[t] = level;
            }
            stats.push_back(csig::adf_stationarity(path, max_lag).statistic);
        }
        std::sort(stats.begin(), stats.end());
        const auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(stats.size() - 1);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(lo);
            return stats[lo] * (1.0 - frac) + stats[std::min(lo + 1, stats.size() - 1)] * frac;
        };
        std::printf("%6zu %10.4f %10.4f %10.4f\n", n, quantile(0.01), quantile(0.05),
                    quantile(0.10));
    }
    return 0;
}
