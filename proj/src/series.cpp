#include "csig/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "csig/errors.hpp"
#include "csig/numstat.hpp"

namespace csig {

Series make_series(std::string id, std::vector<Date> dates, std::vector<double> values) {
    if (dates.size() != values.size()) {
        throw InvalidArgument("series '" + id + "': dates and values differ in length");
    }
    if (values.empty()) throw InvalidArgument("series '" + id + "': empty");
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw InvalidArgument("series '" + id + "': dates not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidArgument("series '" + id + "': non-finite value at index " +
                                  std::to_string(i));
        }
    }
    return Series{std::move(id), std::move(dates), std::move(values)};
}

Ensemble make_ensemble(std::vector<Series> members) {
    if (members.empty()) throw EmptyEnsemble("ensemble has no members");
    std::set<std::string> ids;
    for (const auto& m : members) {
        if (!ids.insert(m.id).second) {
            throw InvalidArgument("duplicate series id '" + m.id + "'");
        }
    }
    const std::vector<Date>& calendar = members.front().dates;
    for (const auto& m : members) {
        if (m.dates != calendar) {
            throw CalendarMismatch("member '" + m.id + "' does not share the ensemble calendar");
        }
    }
    return Ensemble{std::move(members), calendar};
}

AlignmentReport align_series(std::vector<Series> members, double max_missing_frac) {
    if (members.empty()) throw EmptyEnsemble("no series to align");

    std::set<Date> union_dates;
    for (const auto& m : members) union_dates.insert(m.dates.begin(), m.dates.end());
    const double union_size = static_cast<double>(union_dates.size());

    AlignmentReport report;
    std::vector<Series> accepted;
    for (auto& m : members) {
        const double missing = union_size - static_cast<double>(m.dates.size());
        const double frac = missing / union_size;
        if (frac > max_missing_frac) {
            report.rejected.emplace_back(m.id, frac);
        } else {
            accepted.push_back(std::move(m));
        }
    }
    if (accepted.empty()) throw EmptyEnsemble("all members rejected for missing data");

    // Intersection calendar of the accepted members.
    std::vector<Date> calendar(accepted.front().dates);
    for (std::size_t i = 1; i < accepted.size(); ++i) {
        std::vector<Date> next;
        std::set_intersection(calendar.begin(), calendar.end(), accepted[i].dates.begin(),
                              accepted[i].dates.end(), std::back_inserter(next));
        calendar = std::move(next);
    }
    if (calendar.empty()) throw EmptyEnsemble("accepted members share no dates");
    report.dropped_dates = union_dates.size() - calendar.size();

    std::vector<Series> aligned;
    aligned.reserve(accepted.size());
    for (const auto& m : accepted) {
        std::map<Date, double> by_date;
        for (std::size_t i = 0; i < m.size(); ++i) by_date[m.dates[i]] = m.values[i];
        std::vector<double> values;
        values.reserve(calendar.size());
        for (Date d : calendar) values.push_back(by_date.at(d));
        aligned.push_back(Series{m.id, calendar, std::move(values)});
    }
    report.ensemble = make_ensemble(std::move(aligned));
    return report;
}

std::vector<WindowIndex> windows(std::size_t n, const WindowSpec& spec) {
    if (spec.length < 2 || spec.step < 1) throw InvalidArgument("window length >= 2, step >= 1");
    if (n < static_cast<std::size_t>(spec.length)) {
        throw SeriesShorterThanWindow("series of length " + std::to_string(n) +
                                      " shorter than window " + std::to_string(spec.length));
    }
    const std::size_t count = (n - static_cast<std::size_t>(spec.length)) /
                                  static_cast<std::size_t>(spec.step) +
                              1;
    std::vector<WindowIndex> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        WindowIndex idx;
        idx.start = static_cast<std::ptrdiff_t>(w) * spec.step;
        idx.end = idx.start + spec.length;
        out.push_back(idx);
    }
    return out;
}

std::vector<WindowIndex> windows(std::span<const Date> calendar, const WindowSpec& spec) {
    auto out = windows(calendar.size(), spec);
    for (auto& w : out) w.label_date = calendar[static_cast<std::size_t>(w.start + spec.length / 2)];
    return out;
}

Series log_returns(const Series& prices) {
    if (prices.size() < 2) throw TooShort("log returns need at least 2 prices");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices.values[i] > 0.0)) {
            throw NonPositivePrice("series '" + prices.id + "': non-positive price at " +
                                   prices.dates[i].to_iso());
        }
    }
    Series out;
    out.id = prices.id;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.values.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        out.values.push_back(std::log(prices.values[i] / prices.values[i - 1]));
    }
    return out;
}

Ensemble log_returns(const Ensemble& prices) {
    std::vector<Series> members;
    members.reserve(prices.size());
    for (const auto& m : prices.members) members.push_back(log_returns(m));
    return make_ensemble(std::move(members));
}

const char* to_string(UnitRootRejection level) {
    switch (level) {
        case UnitRootRejection::OnePercent: return "1%";
        case UnitRootRejection::FivePercent: return "5%";
        case UnitRootRejection::TenPercent: return "10%";
        case UnitRootRejection::None: return "none";
    }
    return "none";
}

namespace {

// Monte Carlo quantiles of the constant-only unit-root t-statistic under a
// pure random-walk null, 1e5 replicates per length, one lagged difference
// (tools/adf_calibrate.cpp reproduces the table).
struct AdfCriticalRow {
    double n;
    double cv1, cv5, cv10;
};

// adf-calibrate 100000 424242 1
constexpr AdfCriticalRow kAdfCriticalValues[] = {
    {250.0, -3.4445, -2.8651, -2.5693},
    {500.0, -3.4182, -2.8626, -2.5637},
    {1000.0, -3.4401, -2.8649, -2.5663},
};

AdfCriticalRow critical_values_for(std::size_t n) {
    const auto& table = kAdfCriticalValues;
    constexpr std::size_t rows = std::size(table);
    const double nd = static_cast<double>(n);
    if (nd <= table[0].n) return table[0];
    if (nd >= table[rows - 1].n) return table[rows - 1];
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        if (nd <= table[i + 1].n) {
            // Interpolate linearly in 1/n between the bracketing rows.
            const double x0 = 1.0 / table[i].n;
            const double x1 = 1.0 / table[i + 1].n;
            const double t = (1.0 / nd - x0) / (x1 - x0);
            AdfCriticalRow row{nd, 0.0, 0.0, 0.0};
            row.cv1 = table[i].cv1 + t * (table[i + 1].cv1 - table[i].cv1);
            row.cv5 = table[i].cv5 + t * (table[i + 1].cv5 - table[i].cv5);
            row.cv10 = table[i].cv10 + t * (table[i + 1].cv10 - table[i].cv10);
            return row;
        }
    }
    return table[rows - 1];
}

}  // namespace

AdfResult adf_stationarity(std::span<const double> values, int max_lag) {
    if (max_lag < 0) throw InvalidArgument("max_lag must be nonnegative");
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(max_lag) + 10) {
        throw TooShort("series too short for the unit-root regression");
    }

    const int p = max_lag;
    // Rows t = p+1 .. n-1:  dy[t] = a + rho*y[t-1] + sum_i g_i*dy[t-i] + e
    const std::size_t n_obs = n - 1 - static_cast<std::size_t>(p);
    const std::size_t k = 2 + static_cast<std::size_t>(p);
    if (n_obs <= k) throw TooShort("series too short for the unit-root regression");

    Matrix design(n_obs, k);
    std::vector<double> response(n_obs);
    for (std::size_t r = 0; r < n_obs; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(p) + 1;
        response[r] = values[t] - values[t - 1];
        design(r, 0) = 1.0;
        design(r, 1) = values[t - 1];
        for (int i = 1; i <= p; ++i) {
            const std::size_t s = t - static_cast<std::size_t>(i);
            design(r, 1 + static_cast<std::size_t>(i)) = values[s] - values[s - 1];
        }
    }

    OlsFitCov fit;
    try {
        fit = ols_with_covariance(design, response);
    } catch (const RankDeficient& e) {
        throw SingularRegression(std::string("unit-root regression is singular: ") + e.what());
    }

    const double dof = static_cast<double>(fit.fit.n_obs - fit.fit.n_params);
    const double s2 = fit.fit.rss / dof;
    const double se = std::sqrt(s2 * fit.xtx_inverse(1, 1));
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw SingularRegression("zero standard error in the unit-root regression");
    }

    AdfResult result;
    result.statistic = fit.fit.coefficients[1] / se;
    const AdfCriticalRow cv = critical_values_for(n);
    if (result.statistic < cv.cv1) {
        result.reject_unit_root_at = UnitRootRejection::OnePercent;
    } else if (result.statistic < cv.cv5) {
        result.reject_unit_root_at = UnitRootRejection::FivePercent;
    } else if (result.statistic < cv.cv10) {
        result.reject_unit_root_at = UnitRootRejection::TenPercent;
    } else {
        result.reject_unit_root_at = UnitRootRejection::None;
    }
    return result;
}

AdfResult adf_stationarity(const Series& s, int max_lag) {
    return adf_stationarity(std::span<const double>(s.values), max_lag);
}

}  // namespace csig
