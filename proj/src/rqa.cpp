#include "csig/rqa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csig/errors.hpp"
#include "csig/numstat.hpp"

namespace csig {

RecurrencePlot::RecurrencePlot(std::span<const double> values, double epsilon)
    : n_(values.size()), epsilon_(epsilon) {
    if (n_ < 2) throw InvalidArgument("recurrence plot needs at least 2 values");
    if (!(epsilon > 0.0)) throw InvalidArgument("recurrence threshold must be positive");
    cells_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        cells_[i * n_ + i] = 1;
        for (std::size_t j = i + 1; j < n_; ++j) {
            const std::uint8_t rec = std::abs(values[i] - values[j]) < epsilon ? 1 : 0;
            cells_[i * n_ + j] = rec;
            cells_[j * n_ + i] = rec;
        }
    }
}

EpsilonCalibration calibrate_epsilon(std::span<const double> window_values, double target_rr) {
    const std::size_t n = window_values.size();
    if (n < 2) throw InvalidArgument("epsilon calibration needs at least 2 values");
    if (!(target_rr > 0.0 && target_rr < 100.0)) {
        throw InvalidArgument("target recurrence rate must lie in (0, 100)");
    }

    // Unordered pair distances; the ordered multiset is each value twice.
    std::vector<double> dist;
    dist.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dist.push_back(std::abs(window_values[i] - window_values[j]));
        }
    }
    std::sort(dist.begin(), dist.end());
    if (dist.front() == dist.back()) {
        throw DegenerateDistances("all pair distances are identical");
    }

    const std::size_t n_pairs = n * n - n;  // ordered, off-diagonal
    long long q = std::llround(target_rr / 100.0 * static_cast<double>(n_pairs));
    q = std::clamp<long long>(q, 0, static_cast<long long>(n_pairs));

    // Ordered-multiset order statistic: element i (1-based) is dist[(i-1)/2].
    auto ordered_stat = [&](long long i) { return dist[static_cast<std::size_t>((i - 1) / 2)]; };

    EpsilonCalibration out;
    if (q <= 0) {
        out.epsilon = ordered_stat(1) / 2.0;
    } else if (q >= static_cast<long long>(n_pairs)) {
        out.epsilon = std::nextafter(dist.back(), std::numeric_limits<double>::infinity());
    } else {
        const double lo = ordered_stat(q);
        const double hi = ordered_stat(q + 1);
        out.epsilon = 0.5 * (lo + hi);
    }

    const auto below = std::lower_bound(dist.begin(), dist.end(), out.epsilon) - dist.begin();
    out.achieved_rr =
        100.0 * 2.0 * static_cast<double>(below) / static_cast<double>(n_pairs);
    return out;
}

RqaQuantifiers recurrence_quantifiers(const RecurrencePlot& plot, int l_min, int v_min) {
    if (l_min < 2 || v_min < 2) throw InvalidArgument("minimal line lengths must be >= 2");
    const std::size_t n = plot.n();

    long long n_rec = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && plot.recurrent(i, j)) ++n_rec;
        }
    }

    // Diagonal lines parallel to the identity; the identity itself is skipped.
    long long n_diag = 0;
    for (std::size_t off = 1; off < n; ++off) {
        for (int lower = 0; lower < 2; ++lower) {
            long long run = 0;
            for (std::size_t t = 0; t < n - off; ++t) {
                const std::size_t i = lower ? t + off : t;
                const std::size_t j = lower ? t : t + off;
                if (plot.recurrent(i, j)) {
                    ++run;
                } else {
                    if (run >= l_min) n_diag += run;
                    run = 0;
                }
            }
            if (run >= l_min) n_diag += run;
        }
    }

    // Vertical lines: runs include the identity cell (it is recurrent), but
    // identity cells never count toward N_vert.
    long long n_vert = 0;
    for (std::size_t j = 0; j < n; ++j) {
        long long run = 0;
        bool run_has_loi = false;
        auto flush = [&]() {
            if (run >= v_min) n_vert += run - (run_has_loi ? 1 : 0);
            run = 0;
            run_has_loi = false;
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (plot.recurrent(i, j)) {
                ++run;
                if (i == j) run_has_loi = true;
            } else {
                flush();
            }
        }
        flush();
    }

    RqaQuantifiers out;
    const double n_pairs = static_cast<double>(n * n - n);
    out.rr = 100.0 * static_cast<double>(n_rec) / n_pairs;
    out.det = n_rec > 0 ? 100.0 * static_cast<double>(n_diag) / static_cast<double>(n_rec) : 0.0;
    out.lam = n_rec > 0 ? 100.0 * static_cast<double>(n_vert) / static_cast<double>(n_rec) : 0.0;
    return out;
}

RqaQuantifiers recurrence_quantifiers(std::span<const double> window_values, double epsilon,
                                      int l_min, int v_min) {
    return recurrence_quantifiers(RecurrencePlot(window_values, epsilon), l_min, v_min);
}

ArqaResult windowed_arqa(const Ensemble& returns, const WindowSpec& spec, double target_rr,
                         int l_min, int v_min) {
    if (returns.members.empty()) throw EmptyEnsemble("no members for windowed recurrence");
    const auto window_list = windows(std::span<const Date>(returns.calendar), spec);

    ArqaResult result;
    result.mean_det.id = "mean_det";
    result.mean_lam.id = "mean_lam";
    for (const auto& w : window_list) {
        double det_sum = 0.0;
        double lam_sum = 0.0;
        std::size_t counted = 0;
        for (const auto& member : returns.members) {
            std::span<const double> slice(member.values.data() + w.start,
                                          static_cast<std::size_t>(w.end - w.start));
            EpsilonCalibration cal;
            try {
                cal = calibrate_epsilon(slice, target_rr);
            } catch (const DegenerateDistances& e) {
                result.skipped.push_back({w.label_date, member.id, e.what()});
                continue;
            }
            const RqaQuantifiers q = recurrence_quantifiers(slice, cal.epsilon, l_min, v_min);
            RqaSummary row;
            row.rr = q.rr;
            row.det = q.det;
            row.lam = q.lam;
            row.epsilon = cal.epsilon;
            row.achieved_rr = cal.achieved_rr;
            row.window = w;
            row.series_id = member.id;
            result.table.push_back(std::move(row));
            det_sum += q.det;
            lam_sum += q.lam;
            ++counted;
        }
        if (counted == 0) continue;  // window dropped entirely; skips are logged
        result.mean_det.dates.push_back(w.label_date);
        result.mean_det.values.push_back(det_sum / static_cast<double>(counted));
        result.mean_lam.dates.push_back(w.label_date);
        result.mean_lam.values.push_back(lam_sum / static_cast<double>(counted));
    }
    return result;
}

}  // namespace csig
