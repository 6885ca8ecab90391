#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csig/series.hpp"

namespace csig {

/// Thresholded auto-distance matrix: recurrent(i, j) <=> |x(i) - x(j)| < epsilon.
/// The matrix is symmetric; the line of identity (i == j) is recurrent by
/// definition but excluded from every count downstream.
class RecurrencePlot {
public:
    RecurrencePlot(std::span<const double> values, double epsilon);

    std::size_t n() const { return n_; }
    double epsilon() const { return epsilon_; }
    bool recurrent(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
    bool loi_excluded() const { return true; }

private:
    std::size_t n_ = 0;
    double epsilon_ = 0.0;
    std::vector<std::uint8_t> cells_;
};

struct EpsilonCalibration {
    double epsilon = 0.0;
    double achieved_rr = 0.0;  ///< percentage actually reached; ties can shift it off target
};

/// Picks epsilon so the recurrence rate hits target_rr (percent), by exact
/// quantile of the off-diagonal distance multiset: epsilon sits at the
/// midpoint between the q-th and (q+1)-th smallest distance, q = round of the
/// targeted pair count. Throws DegenerateDistances when all distances tie.
EpsilonCalibration calibrate_epsilon(std::span<const double> window_values, double target_rr);

struct RqaQuantifiers {
    double rr = 0.0;   ///< percent of off-diagonal points that recur
    double det = 0.0;  ///< percent of recurrent points on diagonal lines of length >= l_min
    double lam = 0.0;  ///< percent of recurrent points on vertical lines of length >= v_min
};

/// Counting conventions: N_p = n^2 - n ordered off-diagonal pairs; vertical
/// runs may pass through the identity cell (which is genuinely recurrent) but
/// identity cells are never counted; DET = LAM = 0 when nothing recurs.
RqaQuantifiers recurrence_quantifiers(const RecurrencePlot& plot, int l_min = 2, int v_min = 2);
RqaQuantifiers recurrence_quantifiers(std::span<const double> window_values, double epsilon,
                                      int l_min = 2, int v_min = 2);

struct RqaSummary {
    double rr = 0.0;
    double det = 0.0;
    double lam = 0.0;
    double epsilon = 0.0;
    double achieved_rr = 0.0;
    WindowIndex window;
    std::string series_id;
};

struct ArqaSkip {
    Date window_label;
    std::string series_id;
    std::string reason;
};

struct ArqaResult {
    Series mean_det;  ///< across-members mean DET per window, labeled by window midpoint
    Series mean_lam;
    std::vector<RqaSummary> table;  ///< one row per (window, member) that was computed
    std::vector<ArqaSkip> skipped;  ///< members excluded from a window's mean
};

/// Windowed recurrence quantification over an aligned ensemble of log-returns:
/// per window and member, calibrate epsilon to target_rr and quantify; the
/// emitted series are the across-members means of DET and LAM.
ArqaResult windowed_arqa(const Ensemble& returns, const WindowSpec& spec, double target_rr,
                         int l_min = 2, int v_min = 2);

}  // namespace csig
