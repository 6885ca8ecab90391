#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csig/numstat.hpp"
#include "csig/series.hpp"

namespace csig {

struct GcConfig {
    int tau = 5;         ///< lag order of the candidate cause
    int tau_prime = 5;   ///< lag order of the effect's own past
    double alpha = 0.05; ///< significance level for the F-test
};

struct GcResult {
    double f_statistic = 0.0;
    double p_value = 1.0;
    bool causal = false;
    int d1 = 0;  ///< numerator degrees of freedom (= tau)
    int d2 = 0;  ///< residual degrees of freedom
};

/// Tests whether the past of x improves the linear prediction of y beyond y's
/// own past. Fits the lagged regression of y on [1, y-lags] (restricted) and
/// [1, y-lags, x-lags] (unrestricted) over the identical effective sample
/// (the first max(tau, tau_prime) observations dropped once, shared by both
/// fits) and compares residual sums of squares with an F-test.
GcResult gc_test(std::span<const double> x, std::span<const double> y, const GcConfig& cfg);

struct PairDiagnostic {
    Date window_label;
    std::string cause;
    std::string effect;
    std::string reason;
};

/// Asymmetric pairwise verdict matrix for one window; the diagonal carries no
/// meaning and is excluded from every aggregate.
class CausalityMatrix {
public:
    CausalityMatrix(std::vector<std::string> ids, WindowIndex window, double alpha);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const WindowIndex& window() const { return window_; }
    double alpha() const { return alpha_; }

    bool verdict(std::size_t cause, std::size_t effect) const {
        return verdicts_[cause * ids_.size() + effect] != 0;
    }
    double p_value(std::size_t cause, std::size_t effect) const {
        return p_values_[cause * ids_.size() + effect];
    }
    void set(std::size_t cause, std::size_t effect, bool causal, double p);

    /// Mean of the m(m-1) off-diagonal boolean verdicts, in [0, 1].
    double mean_offdiagonal() const;

private:
    std::vector<std::string> ids_;
    WindowIndex window_;
    double alpha_ = 0.05;
    std::vector<std::uint8_t> verdicts_;
    std::vector<double> p_values_;
};

/// Runs gc_test for every ordered member pair over one window of an aligned
/// log-return ensemble. A failing pair (constant or collinear data) is
/// recorded as non-causal with p = 1 and a diagnostic instead of aborting.
CausalityMatrix causality_matrix(const Ensemble& returns, const WindowIndex& window,
                                 const GcConfig& cfg,
                                 std::vector<PairDiagnostic>* diagnostics = nullptr);

/// Mean off-diagonal verdict per sliding window, labeled by window midpoints.
Series mean_causality_series(const Ensemble& returns, const WindowSpec& spec, const GcConfig& cfg,
                             std::vector<PairDiagnostic>* diagnostics = nullptr);

/// Pearson cross-correlation of every member pair over one window: symmetric,
/// unit diagonal. Entries involving a constant member are NaN and diagnosed.
Matrix correlation_matrix(const Ensemble& returns, const WindowIndex& window,
                          std::vector<PairDiagnostic>* diagnostics = nullptr);

/// Fraction of windows whose value exceeds baseline_mean + 2 * baseline_sd.
double exceedance_fraction(const Series& mean_causality, double baseline_mean,
                           double baseline_sd);

}  // namespace csig
