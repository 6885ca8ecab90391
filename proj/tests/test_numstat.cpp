#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "csig/errors.hpp"
#include "csig/numstat.hpp"
#include "support/oracles.hpp"

using namespace csig;

namespace {

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

}  // namespace

TEST_CASE("ols recovers an exact linear fit") {
    const Matrix design = matrix_from({{1, 0}, {1, 1}, {1, 2}});
    const std::vector<double> response{1, 3, 5};
    const OlsFit fit = ols(design, response);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.rss == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(fit.n_obs == 3);
    CHECK(fit.n_params == 2);
}

TEST_CASE("ols intercept-only model is the mean") {
    const Matrix design = matrix_from({{1}, {1}, {1}});
    const OlsFit fit = ols(design, std::vector<double>{2, 2, 2});
    CHECK(fit.coefficients[0] == doctest::Approx(2.0));
    CHECK(fit.rss == doctest::Approx(0.0));
}

TEST_CASE("ols rejects a duplicated column") {
    const Matrix design = matrix_from({{1, 1}, {2, 2}, {3, 3}, {4, 4}});
    CHECK_THROWS_AS(ols(design, std::vector<double>{1, 2, 3, 4}), RankDeficient);
}

TEST_CASE("ols requires more rows than columns") {
    const Matrix design = matrix_from({{1, 0}, {1, 1}});
    CHECK_THROWS_AS(ols(design, std::vector<double>{1, 2}), InvalidArgument);
}

TEST_CASE("ols residuals are orthogonal to every design column") {
    RandomSource rng(91, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 40 + static_cast<std::size_t>(rng.next_u64() % 60);
        const std::size_t k = 2 + static_cast<std::size_t>(rng.next_u64() % 5);
        Matrix design(n, k);
        std::vector<double> response(n);
        for (std::size_t i = 0; i < n; ++i) {
            design(i, 0) = 1.0;
            for (std::size_t j = 1; j < k; ++j) design(i, j) = rng.standard_normal();
            response[i] = rng.standard_normal();
        }
        const OlsFit fit = ols(design, response);
        double scale = 0.0;
        for (double y : response) scale += y * y;
        for (std::size_t j = 0; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double fitted = 0.0;
                for (std::size_t c = 0; c < k; ++c) fitted += design(i, c) * fit.coefficients[c];
                dot += design(i, j) * (response[i] - fitted);
            }
            CHECK(std::abs(dot) < 1e-8 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("ols covariance matches the closed form for a line fit") {
    // x = 0..4: (X'X)^-1 has known entries.
    Matrix design(5, 2);
    std::vector<double> y(5);
    for (int i = 0; i < 5; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = i;
        y[i] = 0.5 * i + 1.0;
    }
    const OlsFitCov fit = ols_with_covariance(design, y);
    // X'X = [[5,10],[10,30]], inverse = [[0.6,-0.2],[-0.2,0.1]]
    CHECK(fit.xtx_inverse(0, 0) == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(fit.xtx_inverse(0, 1) == doctest::Approx(-0.2).epsilon(1e-10));
    CHECK(fit.xtx_inverse(1, 1) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("f_sf at the median of symmetric F is one half") {
    for (int d : {1, 2, 5, 10, 100, 999}) {
        CHECK(f_sf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("f_sf at zero is one") {
    CHECK(f_sf(0.0, 3, 7) == 1.0);
    CHECK(f_sf(0.0, 1, 1) == 1.0);
}

TEST_CASE("f_sf matches adaptive quadrature of the density") {
    struct Case {
        double x;
        int d1, d2;
    };
    for (const Case c : {Case{4.0, 5, 240}, Case{0.7, 3, 17}, Case{2.5, 10, 400},
                         Case{1.3, 252, 1000}}) {
        const double reference = oracles::f_sf_by_quadrature(c.x, c.d1, c.d2);
        CHECK(f_sf(c.x, c.d1, c.d2) == doctest::Approx(reference).epsilon(1e-8));
    }
}

TEST_CASE("f_sf holds 1e-10 relative accuracy across the df range") {
    // References computed with 40-digit arithmetic and frozen.
    struct Case {
        double x;
        int d1, d2;
        double tail;
    };
    const Case cases[] = {
        {4.0, 5, 240, 0.0016687246960242365299},
        {0.7, 3, 17, 0.56489403636914306365},
        {2.5, 10, 400, 0.0063995869806829745259},
        {1.3, 252, 1000, 0.0032795791335224594953},
        {0.05, 1, 1, 0.85995130390689797354},
        {3.2, 7, 29, 0.012305090454941925918},
        {0.9, 1000, 3, 0.65643564892682341354},
    };
    for (const Case& c : cases) {
        const double got = f_sf(c.x, c.d1, c.d2);
        CHECK(std::abs(got - c.tail) / c.tail < 1e-10);
    }
    // Extreme tail keeps the right order of magnitude.
    const double deep = f_sf(12.0, 1000, 1000);
    CHECK(deep > 0.0);
    CHECK(deep < 1e-270);
}

TEST_CASE("f_sf is nonincreasing in x and vanishes in the tail") {
    double prev = 1.0;
    for (double x = 0.0; x <= 30.0; x += 0.25) {
        const double v = f_sf(x, 5, 240);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(f_sf(1e6, 5, 240) < 1e-12);
}

TEST_CASE("incomplete beta hits known exact points") {
    CHECK(incomplete_beta_reg(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(incomplete_beta_reg(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    // I_x(1, b) = 1 - (1-x)^b
    CHECK(incomplete_beta_reg(1.0, 4.0, 0.2) ==
          doctest::Approx(1.0 - std::pow(0.8, 4)).epsilon(1e-13));
}

TEST_CASE("random source is reproducible and streams are distinct") {
    RandomSource a(12345, 7);
    RandomSource b(12345, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomSource c(12345, 8);
    bool any_diff = false;
    RandomSource a2(12345, 7);
    for (int i = 0; i < 16; ++i) any_diff |= (a2.next_u64() != c.next_u64());
    CHECK(any_diff);
}

TEST_CASE("normal draws have the right first two moments") {
    RandomSource rng(2024, 0);
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.standard_normal();
        sum += z;
        sum2 += z * z;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    CHECK(std::abs(m) < 0.005);
    CHECK(var > 0.994);
    CHECK(var < 1.006);
}

TEST_CASE("uniform draws stay in [0, 1)") {
    RandomSource rng(55, 3);
    double lo = 1.0, hi = -1.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform01();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(hi > 0.999);
    CHECK(lo < 0.001);
}

TEST_CASE("distinct streams decorrelate") {
    const std::size_t n = 100000;
    for (std::uint64_t pair = 0; pair < 3; ++pair) {
        RandomSource a(777, 2 * pair);
        RandomSource b(777, 2 * pair + 1);
        std::vector<double> va(n), vb(n);
        for (std::size_t i = 0; i < n; ++i) {
            va[i] = a.standard_normal();
            vb[i] = b.standard_normal();
        }
        CHECK(std::abs(pearson_corr(va, vb)) < 0.01);
    }
}

TEST_CASE("pearson correlation basics") {
    RandomSource rng(5, 0);
    const auto x = oracles::white_noise(rng, 500);
    std::vector<double> neg(x);
    for (auto& v : neg) v = -v;
    CHECK(pearson_corr(x, x) == doctest::Approx(1.0));
    CHECK(pearson_corr(x, neg) == doctest::Approx(-1.0));

    const std::vector<double> constant(500, 3.5);
    CHECK_THROWS_AS(pearson_corr(x, constant), ConstantInput);
}

TEST_CASE("independent white noise is nearly uncorrelated") {
    RandomSource a(9001, 0), b(9001, 1);
    const auto va = oracles::white_noise(a, 10000);
    const auto vb = oracles::white_noise(b, 10000);
    CHECK(std::abs(pearson_corr(va, vb)) < 0.04);
}

TEST_CASE("pearson correlation is invariant under positive affine maps") {
    RandomSource rng(31, 0);
    const auto x = oracles::white_noise(rng, 300);
    const auto y = oracles::white_noise(rng, 300);
    const double base = pearson_corr(x, y);
    std::vector<double> xs(x), ys(y);
    for (auto& v : xs) v = 2.75 * v + 13.0;
    for (auto& v : ys) v = 0.04 * v - 7.0;
    CHECK(pearson_corr(xs, ys) == doctest::Approx(base).epsilon(1e-12));
}
