#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csig/numstat.hpp"
#include "csig/series.hpp"

namespace csig {

struct GbmParams {
    double mu = 0.0;     ///< drift per day
    double sigma = 0.0;  ///< volatility per sqrt(day); >= 0
    double x0 = 100.0;   ///< initial price; > 0
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Shared driver increments h(t), one per simulated step; zero mean by
/// construction (enforced de-meaning after smoothing).
struct ExternalField {
    Series increments;
    int smoothing_window = 1;

    std::size_t size() const { return increments.size(); }
};

struct DrivenGbmParams {
    GbmParams base;
    double beta = 0.0;  ///< coupling rate to the shared field, in [0, 1]
};

/// Consecutive calendar days starting at `start`.
std::vector<Date> daily_calendar(Date start, std::size_t n);

/// Multiplicative random walk via the exact-solution recursion with dt = 1 day:
/// X_{k+1} = X_k * exp((mu - sigma^2/2) + sigma * Z_k). Returns n_steps + 1 prices.
Series simulate_gbm(const GbmParams& p, std::size_t n_steps,
                    Date start = Date::from_ymd(2000, 1, 3), std::string id = "gbm");

/// Adds the shared driver to each step: X_{k+1} = X_k * exp((mu - sigma^2/2)
/// + sigma * Z_k + beta * h_k). With beta = 0 and the same seed this
/// reproduces simulate_gbm bit-exactly. expected_steps, when nonzero, is
/// validated against the field length.
Series simulate_driven_gbm(const DrivenGbmParams& p, const ExternalField& field,
                           std::size_t expected_steps = 0, std::string id = "driven_gbm",
                           std::optional<Date> first_price_date = std::nullopt);

/// Inverts the exact-solution drift from observed log-returns:
/// sigma = sample stddev, mu = sample mean + sigma^2/2. x0 and the RNG
/// identity are the caller's to fill in.
GbmParams calibrate_from_series(const Series& log_returns);

/// Centered moving average with a symmetric window that shrinks at the
/// boundaries; width must be odd.
std::vector<double> centered_moving_average(std::span<const double> values, int width);

/// Recovers the shared driver from an aligned log-return ensemble: the
/// across-members mean per date, smoothed, then de-meaned to exactly zero.
ExternalField build_external_field(const Ensemble& log_returns, int smoothing_window);

struct FieldEpoch {
    std::size_t start = 0;
    std::size_t end = 0;  ///< exclusive, in step indices
    double amplitude_factor = 1.0;
};

/// Synthetic driver for controlled experiments: Gaussian noise with standard
/// deviation baseline_std outside the epochs and amplitude_factor times that
/// inside, passed through the same smoother as build_external_field (variance
/// compensated) and de-meaned. The smoothing is what gives the driver the
/// temporal correlation that a lagged-regression test can pick up.
ExternalField synthetic_field(std::vector<FieldEpoch> epochs, double baseline_std,
                              std::size_t n_steps, RandomSource& rng, int smoothing_window = 11,
                              Date start = Date::from_ymd(2000, 1, 4));

}  // namespace csig
