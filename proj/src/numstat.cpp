#include "csig/numstat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csig/errors.hpp"

namespace csig {

namespace {

// Householder QR with column pivoting. On return `a` holds R in its upper
// triangle (in pivoted column order), `qty` holds Q'y, `piv[j]` names the
// original column stored at position j.
struct QrFactorization {
    Matrix a;
    std::vector<double> qty;
    std::vector<std::size_t> piv;
};

QrFactorization householder_qr(const Matrix& design, std::span<const double> response) {
    const std::size_t n = design.rows();
    const std::size_t k = design.cols();

    QrFactorization f{design, std::vector<double>(response.begin(), response.end()),
                      std::vector<std::size_t>(k)};
    for (std::size_t j = 0; j < k; ++j) f.piv[j] = j;
    Matrix& a = f.a;

    for (std::size_t j = 0; j < k; ++j) {
        // Pivot on the largest remaining column norm.
        std::size_t best = j;
        double best_norm2 = -1.0;
        for (std::size_t c = j; c < k; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) s += a(i, c) * a(i, c);
            if (s > best_norm2) {
                best_norm2 = s;
                best = c;
            }
        }
        if (best != j) {
            for (std::size_t i = 0; i < n; ++i) std::swap(a(i, j), a(i, best));
            std::swap(f.piv[j], f.piv[best]);
        }

        const double xnorm = std::sqrt(best_norm2 < 0.0 ? 0.0 : best_norm2);
        if (xnorm == 0.0) {
            a(j, j) = 0.0;  // exactly rank deficient; caught by the caller's check
            continue;
        }

        const double beta = -std::copysign(xnorm, a(j, j));
        std::vector<double> v(n - j);
        v[0] = a(j, j) - beta;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a(i, j);
        double vtv = 0.0;
        for (double w : v) vtv += w * w;
        a(j, j) = beta;
        for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;
        if (vtv == 0.0) continue;

        for (std::size_t c = j + 1; c < k; ++c) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i - j] * a(i, c);
            const double scale = 2.0 * dot / vtv;
            for (std::size_t i = j; i < n; ++i) a(i, c) -= scale * v[i - j];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i - j] * f.qty[i];
        const double scale = 2.0 * dot / vtv;
        for (std::size_t i = j; i < n; ++i) f.qty[i] -= scale * v[i - j];
    }
    return f;
}

void check_rank(const Matrix& r, std::size_t n, std::size_t k) {
    double max_diag = 0.0;
    for (std::size_t j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(r(j, j)));
    if (max_diag == 0.0) throw RankDeficient("design matrix is zero");
    const double tol =
        static_cast<double>(std::max(n, k)) * std::numeric_limits<double>::epsilon() * max_diag;
    for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(r(j, j)) <= tol) {
            throw RankDeficient("design matrix is rank deficient (collinear columns)");
        }
    }
}

std::vector<double> solve_coefficients(const QrFactorization& f, std::size_t k) {
    std::vector<double> z(k, 0.0);
    for (std::size_t idx = k; idx-- > 0;) {
        double s = f.qty[idx];
        for (std::size_t c = idx + 1; c < k; ++c) s -= f.a(idx, c) * z[c];
        z[idx] = s / f.a(idx, idx);
    }
    std::vector<double> coef(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) coef[f.piv[j]] = z[j];
    return coef;
}

double residual_sum_of_squares(const Matrix& design, std::span<const double> response,
                               const std::vector<double>& coef) {
    double rss = 0.0;
    for (std::size_t i = 0; i < design.rows(); ++i) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < design.cols(); ++j) fitted += design(i, j) * coef[j];
        const double r = response[i] - fitted;
        rss += r * r;
    }
    return rss;
}

void validate_design(const Matrix& design, std::span<const double> response) {
    if (design.rows() != response.size()) {
        throw InvalidArgument("design rows must match response length");
    }
    if (design.cols() == 0) throw InvalidArgument("design has no columns");
    if (design.rows() <= design.cols()) {
        throw InvalidArgument("need more observations than parameters");
    }
}

}  // namespace

OlsFit ols(const Matrix& design, std::span<const double> response) {
    validate_design(design, response);
    const std::size_t n = design.rows();
    const std::size_t k = design.cols();
    QrFactorization f = householder_qr(design, response);
    check_rank(f.a, n, k);
    OlsFit fit;
    fit.coefficients = solve_coefficients(f, k);
    fit.rss = residual_sum_of_squares(design, response, fit.coefficients);
    fit.n_obs = static_cast<int>(n);
    fit.n_params = static_cast<int>(k);
    return fit;
}

OlsFitCov ols_with_covariance(const Matrix& design, std::span<const double> response) {
    validate_design(design, response);
    const std::size_t n = design.rows();
    const std::size_t k = design.cols();
    QrFactorization f = householder_qr(design, response);
    check_rank(f.a, n, k);

    OlsFitCov out;
    out.fit.coefficients = solve_coefficients(f, k);
    out.fit.rss = residual_sum_of_squares(design, response, out.fit.coefficients);
    out.fit.n_obs = static_cast<int>(n);
    out.fit.n_params = static_cast<int>(k);

    // (X'X)^-1 = P R^-1 R^-T P'; invert the small triangular R column by column.
    Matrix rinv(k, k, 0.0);
    for (std::size_t col = 0; col < k; ++col) {
        for (std::size_t idx = k; idx-- > 0;) {
            double s = (idx == col) ? 1.0 : 0.0;
            for (std::size_t c = idx + 1; c < k; ++c) s -= f.a(idx, c) * rinv(c, col);
            rinv(idx, col) = s / f.a(idx, idx);
        }
    }
    out.xtx_inverse = Matrix(k, k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) s += rinv(i, c) * rinv(j, c);
            out.xtx_inverse(f.piv[i], f.piv[j]) = s;
        }
    }
    return out;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIterations = 400;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta_reg(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_sf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw InvalidArgument("F distribution requires positive df");
    if (!(x >= 0.0)) {
        if (std::isnan(x)) throw InvalidArgument("F statistic is NaN");
        throw InvalidArgument("F statistic must be nonnegative");
    }
    if (std::isinf(x)) return 0.0;
    const double z = d2 / (d2 + static_cast<double>(d1) * x);
    return incomplete_beta_reg(d2 / 2.0, d1 / 2.0, z);
}

double mean(std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw InvalidArgument("sample variance needs at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        const double d = x - m;
        s += d * d;
    }
    return s / static_cast<double>(v.size() - 1);
}

double sample_stddev(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

double pearson_corr(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("correlation requires equal lengths");
    if (a.size() < 2) throw TooShort("correlation requires length >= 2");
    const double ma = mean(a);
    const double mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw ConstantInput("correlation of a constant vector");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Distinct streams start distinct splitmix chains; the avalanche in
    // splitmix64 decorrelates neighbouring (seed, stream) pairs.
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL + stream_id * 0xBF58476D1CE4E5B9ULL);
    for (auto& s : state_) s = splitmix64_next(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RandomSource::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomSource::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace csig
