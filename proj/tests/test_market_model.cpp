#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "csig/errors.hpp"
#include "csig/market_model.hpp"
#include "csig/numstat.hpp"
#include "csig/series.hpp"
#include "support/oracles.hpp"

using namespace csig;

namespace {

ExternalField field_from(std::vector<double> values, int smoothing = 1) {
    ExternalField f;
    f.smoothing_window = smoothing;
    const double m = mean(values);
    for (auto& v : values) v -= m;
    const auto dates = daily_calendar(Date::from_ymd(2000, 1, 4), values.size());
    f.increments = make_series("h", dates, std::move(values));
    return f;
}

}  // namespace

TEST_CASE("zero volatility reduces to deterministic exponential growth") {
    const Series s = simulate_gbm({0.001, 0.0, 100.0, 1, 0}, 500);
    REQUIRE(s.size() == 501);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s.values[k] ==
              doctest::Approx(100.0 * std::exp(0.001 * static_cast<double>(k))).epsilon(1e-12));
    }
}

TEST_CASE("zero drift and volatility hold the price constant") {
    const Series s = simulate_gbm({0.0, 0.0, 42.0, 1, 0}, 100);
    for (double v : s.values) CHECK(v == doctest::Approx(42.0).epsilon(1e-15));
}

TEST_CASE("long-run moments of simulated returns match the parameters") {
    const double mu = 0.0005, sigma = 0.02;
    const std::size_t n = 1'000'000;
    const Series prices = simulate_gbm({mu, sigma, 100.0, 77, 0}, n);
    const Series lr = log_returns(prices);
    const double est_mean = mean(lr.values);
    const double est_sigma = sample_stddev(lr.values);
    CHECK(std::abs(est_sigma - sigma) / sigma < 0.005);
    const double se = sigma / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(est_mean - (mu - 0.5 * sigma * sigma)) < 3.0 * se);

    // Round trip through the calibration.
    const GbmParams back = calibrate_from_series(lr);
    CHECK(std::abs(back.sigma - sigma) / sigma < 0.005);
    CHECK(std::abs(back.mu - mu) < 3.0 * se);
}

TEST_CASE("calibration of constant returns is exact") {
    // A dyadic constant keeps the sample mean exact, so sigma is exactly zero.
    const double c = 0.001953125;
    std::vector<double> values(60, c);
    const Series lr = make_series("r", daily_calendar(Date::from_ymd(2001, 1, 1), 60), values);
    const GbmParams p = calibrate_from_series(lr);
    CHECK(p.sigma == 0.0);
    CHECK(p.mu == c);
}

TEST_CASE("calibration rejects short input") {
    std::vector<double> values(10, 0.001);
    const Series lr = make_series("r", daily_calendar(Date::from_ymd(2001, 1, 1), 10), values);
    CHECK_THROWS_AS(calibrate_from_series(lr), TooShort);
}

TEST_CASE("zero coupling reproduces the plain path bit-exactly") {
    RandomSource noise(5150, 99);
    std::vector<double> h(300);
    for (auto& v : h) v = 0.01 * noise.standard_normal();
    const ExternalField field = field_from(std::move(h));

    const GbmParams p{0.0004, 0.02, 100.0, 31337, 4};
    const Series plain = simulate_gbm(p, 300, field.increments.dates.front() - 1);
    const Series driven = simulate_driven_gbm({p, 0.0}, field);
    REQUIRE(plain.size() == driven.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain.values[i] == driven.values[i]);  // bitwise
        CHECK(plain.dates[i] == driven.dates[i]);
    }
}

TEST_CASE("a pure field path exponentiates the increments") {
    const ExternalField field = field_from({0.1, -0.1});
    const Series s = simulate_driven_gbm({{0.0, 0.0, 100.0, 1, 0}, 1.0}, field);
    REQUIRE(s.size() == 3);
    CHECK(s.values[0] == 100.0);
    CHECK(s.values[1] == doctest::Approx(100.0 * std::exp(0.1)).epsilon(1e-14));
    CHECK(s.values[2] == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("field length mismatches are rejected") {
    const ExternalField field = field_from({0.1, -0.1, 0.0, 0.0});
    CHECK_THROWS_AS(simulate_driven_gbm({{0.0, 0.01, 100.0, 1, 0}, 0.5}, field, 99),
                    FieldLengthMismatch);
    CHECK_THROWS_AS(simulate_driven_gbm({{0.0, 0.01, 100.0, 1, 0}, 1.5}, field),
                    InvalidArgument);
}

TEST_CASE("de-coupled driven returns are distributed like plain returns") {
    // Subtracting beta*h from driven log-returns must leave the plain GBM
    // return law; two-sample KS on independent seeds.
    RandomSource noise(600, 12);
    std::vector<double> h(10000);
    for (auto& v : h) v = 0.012 * noise.standard_normal();
    const ExternalField field = field_from(std::move(h));
    const double beta = 0.63;

    const Series driven = simulate_driven_gbm({{0.0002, 0.02, 100.0, 808, 0}, beta}, field);
    const Series plain = simulate_gbm({0.0002, 0.02, 100.0, 808, 1}, 10000);

    std::vector<double> adjusted = log_returns(driven).values;
    for (std::size_t k = 0; k < adjusted.size(); ++k) {
        adjusted[k] -= beta * field.increments.values[k];
    }
    const double d = oracles::ks_distance(adjusted, log_returns(plain).values);
    // 0.1% critical value for n = m = 1e4.
    CHECK(d < 1.95 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("moving average shrinks symmetrically at the boundary") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto out = centered_moving_average(v, 3);
    CHECK(out[0] == doctest::Approx(1.0));  // half-width 0 at the edge
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(3.0));
    CHECK(out[4] == doctest::Approx(5.0));
    CHECK_THROWS_AS(centered_moving_average(v, 4), InvalidArgument);
    const auto id = centered_moving_average(v, 1);
    CHECK(id == v);
}

TEST_CASE("field built from identical members is their de-meaned returns") {
    RandomSource rng(71, 0);
    std::vector<double> r = oracles::white_noise(rng, 400);
    for (auto& v : r) v *= 0.01;
    const auto calendar = daily_calendar(Date::from_ymd(2002, 3, 1), 400);
    const Ensemble ens =
        make_ensemble({make_series("a", calendar, r), make_series("b", calendar, r)});
    const ExternalField field = build_external_field(ens, 1);
    const double m = mean(r);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(field.increments.values[i] == doctest::Approx(r[i] - m).epsilon(1e-12));
    }
}

TEST_CASE("field mean is zero after construction") {
    RandomSource rng(72, 0);
    const auto calendar = daily_calendar(Date::from_ymd(2002, 3, 1), 500);
    std::vector<Series> members;
    for (int m = 0; m < 5; ++m) {
        auto v = oracles::white_noise(rng, 500);
        for (auto& x : v) x = 0.02 * x + 0.001;
        members.push_back(make_series("m" + std::to_string(m), calendar, std::move(v)));
    }
    const ExternalField field = build_external_field(make_ensemble(std::move(members)), 11);
    CHECK(std::abs(mean(field.increments.values)) < 1e-15);
}

TEST_CASE("averaging N independent members shrinks the field by sqrt(N)") {
    RandomSource rng(73, 0);
    const std::size_t n = 20000;
    const std::size_t members = 16;
    const auto calendar = daily_calendar(Date::from_ymd(2002, 3, 1), n);
    std::vector<Series> list;
    for (std::size_t m = 0; m < members; ++m) {
        RandomSource r(73, 100 + m);
        auto v = oracles::white_noise(r, n);
        for (auto& x : v) x *= 0.02;
        list.push_back(make_series("m" + std::to_string(m), calendar, std::move(v)));
    }
    const ExternalField field = build_external_field(make_ensemble(std::move(list)), 1);
    const double expected = 0.02 / std::sqrt(static_cast<double>(members));
    CHECK(sample_stddev(field.increments.values) ==
          doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("synthetic field without epochs is stationary noise at the target level") {
    RandomSource rng(74, 0);
    const ExternalField field = synthetic_field({}, 0.005, 8000, rng, 11);
    CHECK(std::abs(mean(field.increments.values)) < 1e-15);
    // Smoothing-compensated: interior std close to the requested baseline.
    CHECK(sample_stddev(field.increments.values) == doctest::Approx(0.005).epsilon(0.10));
}

TEST_CASE("an amplitude-8 epoch scales the in-epoch deviations") {
    RandomSource rng(75, 0);
    const std::size_t n = 4000;
    const ExternalField field = synthetic_field({{1500, 2500, 8.0}}, 0.004, n, rng, 11);
    std::vector<double> inside, outside;
    for (std::size_t t = 0; t < n; ++t) {
        // Leave a smoothing margin around the boundary.
        if (t >= 1510 && t < 2490) inside.push_back(field.increments.values[t]);
        if (t < 1480 || t >= 2520) outside.push_back(field.increments.values[t]);
    }
    const double ratio = sample_stddev(inside) / sample_stddev(outside);
    CHECK(ratio > 7.0);
    CHECK(ratio < 9.0);
}

TEST_CASE("a unit-amplitude epoch is indistinguishable from none") {
    RandomSource rng(76, 0);
    const std::size_t n = 6000;
    const ExternalField field = synthetic_field({{2000, 3000, 1.0}}, 0.004, n, rng, 11);
    std::vector<double> inside, outside;
    for (std::size_t t = 0; t < n; ++t) {
        if (t >= 2000 && t < 3000) inside.push_back(field.increments.values[t]);
        else outside.push_back(field.increments.values[t]);
    }
    const double vr = sample_variance(inside) / sample_variance(outside);
    CHECK(vr > 0.8);
    CHECK(vr < 1.25);
}

TEST_CASE("overlapping or out-of-range epochs are rejected") {
    RandomSource rng(77, 0);
    CHECK_THROWS_AS(synthetic_field({{100, 300, 5.0}, {250, 400, 8.0}}, 0.004, 1000, rng),
                    OverlappingEpochs);
    CHECK_THROWS_AS(synthetic_field({{900, 1200, 5.0}}, 0.004, 1000, rng), InvalidArgument);
    CHECK_THROWS_AS(synthetic_field({{300, 100, 5.0}}, 0.004, 1000, rng), InvalidArgument);
}

TEST_CASE("an epoch raises in-window cross-correlations of driven paths") {
    RandomSource frng(78, 0);
    const std::size_t n = 2000;
    const ExternalField field = synthetic_field({{1200, 1800, 8.0}}, 0.008, n, frng, 11);
    RandomSource brng(78, 1);
    std::vector<Series> paths;
    for (std::size_t i = 0; i < 10; ++i) {
        paths.push_back(simulate_driven_gbm({{0.0003, 0.02, 100.0, 555, i}, brng.uniform01()},
                                            field, n, "p" + std::to_string(i)));
    }
    const Ensemble returns = log_returns(make_ensemble(std::move(paths)));

    auto mean_abs_corr = [&](std::size_t start) {
        double total = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < returns.size(); ++i) {
            for (std::size_t j = i + 1; j < returns.size(); ++j) {
                std::span<const double> a(returns.members[i].values.data() + start, 500);
                std::span<const double> b(returns.members[j].values.data() + start, 500);
                total += std::abs(pearson_corr(a, b));
                ++count;
            }
        }
        return total / count;
    };
    const double quiet = mean_abs_corr(100);
    const double crisis = mean_abs_corr(1280);
    CHECK(crisis > quiet);
}
