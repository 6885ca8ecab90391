#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace csig {

/// Dense row-major matrix; just enough for the regression work done here.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Least-squares fit y ~ X·b.
struct OlsFit {
    std::vector<double> coefficients;
    double rss = 0.0;  ///< squared norm of the residual vector
    int n_obs = 0;
    int n_params = 0;
};

/// Minimizes ||y - X·b||^2 by Householder QR with column pivoting.
/// Requires more rows than columns; throws RankDeficient when the design has
/// numerically collinear columns (constant or duplicated regressors).
OlsFit ols(const Matrix& design, std::span<const double> response);

/// OLS plus the unscaled parameter covariance (X'X)^-1, for t-statistics.
struct OlsFitCov {
    OlsFit fit;
    Matrix xtx_inverse;
};
OlsFitCov ols_with_covariance(const Matrix& design, std::span<const double> response);

/// Regularized incomplete beta function I_x(a, b), continued-fraction evaluation.
double incomplete_beta_reg(double a, double b, double x);

/// Survival function P(F > x) of the Fisher F(d1, d2) distribution.
double f_sf(double x, int d1, int d2);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);  ///< n-1 denominator
double sample_stddev(std::span<const double> v);

/// Pearson correlation coefficient; throws ConstantInput if either vector is constant.
double pearson_corr(std::span<const double> a, std::span<const double> b);

/// Deterministic xoshiro256++ generator. The (seed, stream_id) pair fixes the
/// whole sequence bit-exactly; distinct stream ids give independent streams,
/// one per simulated path.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();
    double uniform01();        ///< in [0, 1)
    double standard_normal();  ///< mean 0, variance 1 (Box-Muller)

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace csig
