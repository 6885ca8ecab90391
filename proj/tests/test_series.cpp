#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "csig/errors.hpp"
#include "csig/numstat.hpp"
#include "csig/series.hpp"
#include "support/oracles.hpp"

using namespace csig;

namespace {

Series price_series(std::vector<double> values, const char* id = "t") {
    std::vector<Date> dates;
    for (std::size_t i = 0; i < values.size(); ++i) {
        dates.push_back(Date::from_ymd(2020, 1, 1) + static_cast<int>(i));
    }
    return make_series(id, std::move(dates), std::move(values));
}

}  // namespace

TEST_CASE("dates round-trip through ISO text") {
    for (const char* iso : {"2000-01-03", "2020-02-29", "1999-12-31", "2021-07-04"}) {
        CHECK(Date::parse_iso(iso).to_iso() == iso);
    }
    CHECK(Date::from_ymd(1970, 1, 1).days_since_epoch() == 0);
    CHECK(Date::from_ymd(1970, 1, 2) - Date::from_ymd(1970, 1, 1) == 1);
    CHECK_THROWS(Date::parse_iso("2021-02-30"));
    CHECK_THROWS(Date::parse_iso("20210230"));
    CHECK_THROWS(Date::parse_iso("2021-13-01"));
}

TEST_CASE("series invariants are enforced") {
    CHECK_THROWS_AS(make_series("a", {}, {}), InvalidArgument);
    CHECK_THROWS_AS(make_series("a", {Date(2), Date(1)}, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(make_series("a", {Date(1), Date(1)}, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(make_series("a", {Date(1)}, {std::nan("")}), InvalidArgument);
}

TEST_CASE("log returns of a constant price series are zero") {
    const Series out = log_returns(price_series({1, 1, 1, 1}));
    REQUIRE(out.size() == 3);
    for (double v : out.values) CHECK(v == 0.0);
    CHECK(out.dates.front() == Date::from_ymd(2020, 1, 2));
}

TEST_CASE("log returns of an exact exponential are ones") {
    const double e = std::exp(1.0);
    const Series out = log_returns(price_series({1.0, e, e * e}));
    REQUIRE(out.size() == 2);
    CHECK(out.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out.values[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log returns reject non-positive prices and short input") {
    CHECK_THROWS_AS(log_returns(price_series({100, 0, 5})), NonPositivePrice);
    CHECK_THROWS_AS(log_returns(price_series({100, -2, 5})), NonPositivePrice);
    CHECK_THROWS_AS(log_returns(price_series({100})), TooShort);
}

TEST_CASE("log returns invert cumulative exponentiation") {
    RandomSource rng(17, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const auto returns = oracles::white_noise(rng, 400);
        std::vector<double> prices{50.0};
        for (double r : returns) prices.push_back(prices.back() * std::exp(0.01 * r));
        const Series back = log_returns(price_series(std::move(prices)));
        REQUIRE(back.size() == returns.size());
        for (std::size_t i = 0; i < returns.size(); ++i) {
            CHECK(back.values[i] ==
                  doctest::Approx(0.01 * returns[i]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("window counts match the closed form") {
    CHECK(windows(300, {252, 63}).size() == 1);
    const auto w378 = windows(378, {252, 63});
    REQUIRE(w378.size() == 3);
    CHECK(w378[0].start == 0);
    CHECK(w378[1].start == 63);
    CHECK(w378[2].start == 126);
    const auto exact = windows(252, {252, 63});
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].start == 0);
    CHECK(exact[0].end == 252);
    CHECK_THROWS_AS(windows(251, {252, 63}), SeriesShorterThanWindow);
    CHECK_THROWS_AS(windows(300, {1, 63}), InvalidArgument);
    CHECK_THROWS_AS(windows(300, {252, 0}), InvalidArgument);
}

TEST_CASE("windows never overrun and advance by exactly one step") {
    RandomSource rng(23, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int length = 2 + static_cast<int>(rng.next_u64() % 40);
        const int step = 1 + static_cast<int>(rng.next_u64() % 15);
        const std::size_t n = static_cast<std::size_t>(length) + rng.next_u64() % 200;
        const auto list = windows(n, {length, step});
        REQUIRE(!list.empty());
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(list[i].end - list[i].start == length);
            CHECK(list[i].end <= static_cast<std::ptrdiff_t>(n));
            if (i > 0) CHECK(list[i].start - list[i - 1].start == step);
        }
        // The next window would overrun.
        CHECK(list.back().start + step + length > static_cast<std::ptrdiff_t>(n));
    }
}

TEST_CASE("window labels sit at the middle of the window") {
    std::vector<Date> calendar;
    for (int i = 0; i < 378; ++i) calendar.push_back(Date(1000 + i));
    const auto list = windows(std::span<const Date>(calendar), {252, 63});
    REQUIRE(list.size() == 3);
    for (const auto& w : list) {
        CHECK(w.label_date == calendar[static_cast<std::size_t>(w.start) + 126]);
    }
}

TEST_CASE("ensembles require shared calendars and unique ids") {
    Series a = price_series({1, 2, 3}, "A");
    Series b = price_series({4, 5, 6}, "B");
    const Ensemble ens = make_ensemble({a, b});
    CHECK(ens.size() == 2);
    CHECK(ens.calendar == a.dates);

    Series dup = price_series({7, 8, 9}, "A");
    CHECK_THROWS_AS(make_ensemble({a, dup}), InvalidArgument);

    Series offset =
        make_series("C", {Date(5000), Date(5001), Date(5002)}, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(make_ensemble({a, offset}), CalendarMismatch);
}

TEST_CASE("alignment inner-joins calendars and rejects gappy members") {
    std::vector<Date> base;
    for (int i = 0; i < 100; ++i) base.push_back(Date(100 + i));

    std::vector<Date> shifted(base.begin() + 1, base.end());
    shifted.push_back(Date(200));

    Series full = make_series("full", base, std::vector<double>(100, 1.0));
    Series offset = make_series("offset", shifted, std::vector<double>(100, 2.0));

    // Drop 40 of 101 union dates from a third member: rejected.
    std::vector<Date> sparse_dates(base.begin(), base.begin() + 60);
    Series sparse = make_series("sparse", sparse_dates, std::vector<double>(60, 3.0));

    const AlignmentReport report = align_series({full, offset, sparse});
    CHECK(report.ensemble.size() == 2);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.rejected[0].first == "sparse");
    CHECK(report.rejected[0].second > 0.05);
    // Intersection of full and offset: dates 101..199 (99 days).
    CHECK(report.ensemble.calendar.size() == 99);
    CHECK(report.ensemble.calendar.front() == Date(101));
    CHECK(report.ensemble.calendar.back() == Date(199));
    CHECK(report.dropped_dates == 101 - 99);
}

TEST_CASE("unit-root test distinguishes a random walk from white noise") {
    // Sized with the calibrated critical values: the null is rejected at most
    // ~10% of the time on a true random walk, essentially always on noise.
    const std::size_t n = 2000;
    int walk_none = 0;
    int noise_at_1pct = 0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s) {
        RandomSource rng(4000 + s, 0);
        std::vector<double> walk(n);
        double level = 0.0;
        for (auto& v : walk) {
            level += rng.standard_normal();
            v = level;
        }
        if (adf_stationarity(walk, 1).reject_unit_root_at == UnitRootRejection::None) {
            ++walk_none;
        }
        RandomSource rng2(9000 + s, 0);
        const auto noise = oracles::white_noise(rng2, n);
        if (adf_stationarity(noise, 1).reject_unit_root_at == UnitRootRejection::OnePercent) {
            ++noise_at_1pct;
        }
    }
    // The walk's no-rejection probability is 0.90 by construction (the 10%
    // critical value); allow two binomial standard errors at 1000 seeds.
    CHECK(walk_none >= 881);
    CHECK(noise_at_1pct >= 990);
}

TEST_CASE("unit-root test guards degenerate input") {
    const std::vector<double> constant(50, 3.0);
    CHECK_THROWS_AS(adf_stationarity(constant, 1), SingularRegression);
    const std::vector<double> tiny(5, 1.0);
    CHECK_THROWS_AS(adf_stationarity(tiny, 1), TooShort);
}

TEST_CASE("unit-root test has power at the analysis window length") {
    int rejected = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        RandomSource rng(12000 + s, 0);
        const auto noise = oracles::white_noise(rng, 252);
        if (adf_stationarity(noise, 1).reject_unit_root_at == UnitRootRejection::OnePercent) {
            ++rejected;
        }
    }
    CHECK(rejected == seeds);
}

TEST_CASE("unit-root statistic ignores a level shift") {
    RandomSource rng(611, 0);
    const auto noise = oracles::white_noise(rng, 500);
    std::vector<double> shifted(noise);
    for (auto& v : shifted) v += 5.0;
    const double a = adf_stationarity(noise, 1).statistic;
    const double b = adf_stationarity(shifted, 1).statistic;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}
