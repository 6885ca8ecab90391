#include "csig/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csig/errors.hpp"

namespace csig {

namespace {

Matrix lagged_design(std::span<const double> x, std::span<const double> y, int tau, int tau_prime,
                     bool include_x) {
    const int max_lag = std::max(tau, tau_prime);
    const std::size_t n_obs = y.size() - static_cast<std::size_t>(max_lag);
    const std::size_t k =
        1 + static_cast<std::size_t>(tau_prime) + (include_x ? static_cast<std::size_t>(tau) : 0);
    Matrix design(n_obs, k);
    for (std::size_t r = 0; r < n_obs; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(max_lag);
        design(r, 0) = 1.0;
        for (int l = 1; l <= tau_prime; ++l) {
            design(r, static_cast<std::size_t>(l)) = y[t - static_cast<std::size_t>(l)];
        }
        if (include_x) {
            for (int l = 1; l <= tau; ++l) {
                design(r, static_cast<std::size_t>(tau_prime + l)) =
                    x[t - static_cast<std::size_t>(l)];
            }
        }
    }
    return design;
}

}  // namespace

GcResult gc_test(std::span<const double> x, std::span<const double> y, const GcConfig& cfg) {
    if (cfg.tau < 1 || cfg.tau_prime < 1) throw InvalidArgument("lag orders must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
    if (x.size() != y.size()) throw InvalidArgument("series lengths differ");
    const std::size_t min_len = static_cast<std::size_t>(1 + cfg.tau_prime + cfg.tau + 10);
    if (y.size() <= min_len) throw TooShort("too few observations for the causality regression");

    const int max_lag = std::max(cfg.tau, cfg.tau_prime);
    const std::size_t n_obs = y.size() - static_cast<std::size_t>(max_lag);
    std::span<const double> response = y.subspan(static_cast<std::size_t>(max_lag));

    const Matrix unrestricted = lagged_design(x, y, cfg.tau, cfg.tau_prime, true);
    const Matrix restricted = lagged_design(x, y, cfg.tau, cfg.tau_prime, false);
    const double rss_u = ols(unrestricted, response).rss;
    const double rss_r = ols(restricted, response).rss;

    GcResult result;
    result.d1 = cfg.tau;
    result.d2 = static_cast<int>(n_obs) - (1 + cfg.tau_prime + cfg.tau);
    if (result.d2 < 1) throw TooShort("no residual degrees of freedom");

    const double num = std::max(rss_r - rss_u, 0.0) / static_cast<double>(cfg.tau);
    const double den = rss_u / static_cast<double>(result.d2);
    if (den > 0.0) {
        result.f_statistic = num / den;
        result.p_value = f_sf(result.f_statistic, result.d1, result.d2);
    } else {
        // Perfect unrestricted fit: any improvement is infinitely significant.
        result.f_statistic = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        result.p_value = num > 0.0 ? 0.0 : 1.0;
    }
    result.causal = result.p_value < cfg.alpha;
    return result;
}

CausalityMatrix::CausalityMatrix(std::vector<std::string> ids, WindowIndex window, double alpha)
    : ids_(std::move(ids)),
      window_(window),
      alpha_(alpha),
      verdicts_(ids_.size() * ids_.size(), 0),
      p_values_(ids_.size() * ids_.size(), 1.0) {}

void CausalityMatrix::set(std::size_t cause, std::size_t effect, bool causal, double p) {
    verdicts_[cause * ids_.size() + effect] = causal ? 1 : 0;
    p_values_[cause * ids_.size() + effect] = p;
}

double CausalityMatrix::mean_offdiagonal() const {
    const std::size_t m = ids_.size();
    if (m < 2) return 0.0;
    long long positive = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && verdict(i, j)) ++positive;
        }
    }
    return static_cast<double>(positive) / static_cast<double>(m * (m - 1));
}

CausalityMatrix causality_matrix(const Ensemble& returns, const WindowIndex& window,
                                 const GcConfig& cfg, std::vector<PairDiagnostic>* diagnostics) {
    const std::size_t m = returns.size();
    if (m < 2) throw InvalidArgument("pairwise causality needs at least 2 members");

    std::vector<std::string> ids;
    ids.reserve(m);
    for (const auto& member : returns.members) ids.push_back(member.id);
    CausalityMatrix matrix(std::move(ids), window, cfg.alpha);

    const auto slice = [&](std::size_t member) {
        return std::span<const double>(returns.members[member].values.data() + window.start,
                                       static_cast<std::size_t>(window.end - window.start));
    };
    for (std::size_t cause = 0; cause < m; ++cause) {
        for (std::size_t effect = 0; effect < m; ++effect) {
            if (cause == effect) continue;
            try {
                const GcResult r = gc_test(slice(cause), slice(effect), cfg);
                matrix.set(cause, effect, r.causal, r.p_value);
            } catch (const Error& e) {
                matrix.set(cause, effect, false, 1.0);
                if (diagnostics) {
                    diagnostics->push_back({window.label_date, returns.members[cause].id,
                                            returns.members[effect].id, e.what()});
                }
            }
        }
    }
    return matrix;
}

Series mean_causality_series(const Ensemble& returns, const WindowSpec& spec, const GcConfig& cfg,
                             std::vector<PairDiagnostic>* diagnostics) {
    const auto window_list = windows(std::span<const Date>(returns.calendar), spec);
    Series out;
    out.id = "mean_causality";
    out.dates.reserve(window_list.size());
    out.values.reserve(window_list.size());
    for (const auto& w : window_list) {
        const CausalityMatrix matrix = causality_matrix(returns, w, cfg, diagnostics);
        out.dates.push_back(w.label_date);
        out.values.push_back(matrix.mean_offdiagonal());
    }
    return out;
}

Matrix correlation_matrix(const Ensemble& returns, const WindowIndex& window,
                          std::vector<PairDiagnostic>* diagnostics) {
    const std::size_t m = returns.size();
    if (m < 2) throw InvalidArgument("cross-correlation needs at least 2 members");
    const auto slice = [&](std::size_t member) {
        return std::span<const double>(returns.members[member].values.data() + window.start,
                                       static_cast<std::size_t>(window.end - window.start));
    };
    Matrix corr(m, m, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < m; ++i) corr(i, i) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            try {
                const double r = pearson_corr(slice(i), slice(j));
                corr(i, j) = r;
                corr(j, i) = r;
            } catch (const Error& e) {
                if (diagnostics) {
                    diagnostics->push_back({window.label_date, returns.members[i].id,
                                            returns.members[j].id, e.what()});
                }
            }
        }
    }
    return corr;
}

double exceedance_fraction(const Series& mean_causality, double baseline_mean,
                           double baseline_sd) {
    if (!(baseline_sd > 0.0)) throw InvalidArgument("baseline standard deviation must be positive");
    if (mean_causality.values.empty()) return 0.0;
    const double threshold = baseline_mean + 2.0 * baseline_sd;
    std::size_t above = 0;
    for (double v : mean_causality.values) {
        if (v > threshold) ++above;
    }
    return static_cast<double>(above) / static_cast<double>(mean_causality.values.size());
}

}  // namespace csig
