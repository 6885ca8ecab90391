#include "csig/market_model.hpp"

#include <algorithm>
#include <cmath>

#include "csig/errors.hpp"

namespace csig {

std::vector<Date> daily_calendar(Date start, std::size_t n) {
    std::vector<Date> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<int>(i));
    return out;
}

namespace {

void validate_gbm_params(const GbmParams& p) {
    if (!(p.sigma >= 0.0)) throw InvalidArgument("volatility must be nonnegative");
    if (!(p.x0 > 0.0)) throw InvalidArgument("initial price must be positive");
}

}  // namespace

Series simulate_gbm(const GbmParams& p, std::size_t n_steps, Date start, std::string id) {
    validate_gbm_params(p);
    if (n_steps < 1) throw InvalidArgument("need at least one step");
    RandomSource rng(p.seed, p.stream_id);
    const double drift = p.mu - 0.5 * p.sigma * p.sigma;

    Series out;
    out.id = std::move(id);
    out.dates = daily_calendar(start, n_steps + 1);
    out.values.reserve(n_steps + 1);
    out.values.push_back(p.x0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        out.values.push_back(out.values.back() * std::exp(drift + p.sigma * rng.standard_normal()));
    }
    return out;
}

Series simulate_driven_gbm(const DrivenGbmParams& p, const ExternalField& field,
                           std::size_t expected_steps, std::string id,
                           std::optional<Date> first_price_date) {
    validate_gbm_params(p.base);
    if (!(p.beta >= 0.0 && p.beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
    const std::size_t n_steps = field.size();
    if (n_steps < 1) throw InvalidArgument("field is empty");
    if (expected_steps != 0 && expected_steps != n_steps) {
        throw FieldLengthMismatch("field has " + std::to_string(n_steps) + " increments, expected " +
                                  std::to_string(expected_steps));
    }

    RandomSource rng(p.base.seed, p.base.stream_id);
    const double drift = p.base.mu - 0.5 * p.base.sigma * p.base.sigma;

    Series out;
    out.id = std::move(id);
    out.dates.reserve(n_steps + 1);
    out.dates.push_back(first_price_date.value_or(field.increments.dates.front() - 1));
    out.dates.insert(out.dates.end(), field.increments.dates.begin(), field.increments.dates.end());
    if (!(out.dates[0] < out.dates[1])) throw InvalidArgument("first price date not before the field");

    out.values.reserve(n_steps + 1);
    out.values.push_back(p.base.x0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double step =
            drift + p.base.sigma * rng.standard_normal() + p.beta * field.increments.values[k];
        out.values.push_back(out.values.back() * std::exp(step));
    }
    return out;
}

GbmParams calibrate_from_series(const Series& log_returns) {
    if (log_returns.size() < 30) throw TooShort("need at least 30 log-returns to calibrate");
    GbmParams p;
    p.sigma = sample_stddev(log_returns.values);
    p.mu = mean(log_returns.values) + 0.5 * p.sigma * p.sigma;
    return p;
}

std::vector<double> centered_moving_average(std::span<const double> values, int width) {
    if (width < 1 || width % 2 == 0) throw InvalidArgument("smoothing width must be odd and >= 1");
    const std::size_t n = values.size();
    const std::size_t half = static_cast<std::size_t>(width) / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t h = std::min({half, i, n - 1 - i});
        double s = 0.0;
        for (std::size_t j = i - h; j <= i + h; ++j) s += values[j];
        out[i] = s / static_cast<double>(2 * h + 1);
    }
    return out;
}

namespace {

Series demeaned_series(std::string id, std::vector<Date> dates, std::vector<double> values) {
    const double m = mean(values);
    for (double& v : values) v -= m;
    return make_series(std::move(id), std::move(dates), std::move(values));
}

}  // namespace

ExternalField build_external_field(const Ensemble& log_returns, int smoothing_window) {
    if (log_returns.size() < 2) throw InvalidArgument("field construction needs >= 2 members");
    const std::size_t n = log_returns.calendar.size();
    std::vector<double> raw(n, 0.0);
    for (const auto& member : log_returns.members) {
        for (std::size_t t = 0; t < n; ++t) raw[t] += member.values[t];
    }
    const double inv_m = 1.0 / static_cast<double>(log_returns.size());
    for (double& v : raw) v *= inv_m;

    std::vector<double> smooth = centered_moving_average(raw, smoothing_window);
    ExternalField field;
    field.smoothing_window = smoothing_window;
    field.increments = demeaned_series("h", log_returns.calendar, std::move(smooth));
    return field;
}

ExternalField synthetic_field(std::vector<FieldEpoch> epochs, double baseline_std,
                              std::size_t n_steps, RandomSource& rng, int smoothing_window,
                              Date start) {
    if (!(baseline_std > 0.0)) throw InvalidArgument("baseline standard deviation must be positive");
    if (n_steps < 2) throw InvalidArgument("field needs at least 2 steps");
    std::sort(epochs.begin(), epochs.end(),
              [](const FieldEpoch& a, const FieldEpoch& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const auto& e = epochs[i];
        if (e.start >= e.end || e.end > n_steps) throw InvalidArgument("epoch outside [0, n_steps)");
        if (!(e.amplitude_factor > 0.0)) throw InvalidArgument("epoch amplitude must be positive");
        if (i > 0 && e.start < epochs[i - 1].end) {
            throw OverlappingEpochs("epochs overlap at step " + std::to_string(e.start));
        }
    }

    // Pre-scale by sqrt(width) so the smoothed interior keeps the target
    // standard deviation.
    const double scale = std::sqrt(static_cast<double>(smoothing_window));
    std::vector<double> raw(n_steps);
    std::size_t epoch_idx = 0;
    for (std::size_t t = 0; t < n_steps; ++t) {
        while (epoch_idx < epochs.size() && t >= epochs[epoch_idx].end) ++epoch_idx;
        const bool inside =
            epoch_idx < epochs.size() && t >= epochs[epoch_idx].start && t < epochs[epoch_idx].end;
        const double amp = inside ? epochs[epoch_idx].amplitude_factor : 1.0;
        raw[t] = baseline_std * amp * scale * rng.standard_normal();
    }

    std::vector<double> smooth = centered_moving_average(raw, smoothing_window);
    ExternalField field;
    field.smoothing_window = smoothing_window;
    field.increments = demeaned_series("h", daily_calendar(start, n_steps), std::move(smooth));
    return field;
}

}  // namespace csig
