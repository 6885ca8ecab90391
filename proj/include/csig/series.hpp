#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csig/date.hpp"

namespace csig {

/// Named, date-indexed scalar series (prices in currency units or log-returns).
/// Invariants: dates strictly increasing, values finite, equal lengths >= 1.
struct Series {
    std::string id;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Validates the Series invariants and builds the value.
Series make_series(std::string id, std::vector<Date> dates, std::vector<double> values);

/// Collection of series sharing one calendar; member ids are unique.
struct Ensemble {
    std::vector<Series> members;
    std::vector<Date> calendar;

    std::size_t size() const { return members.size(); }
};

/// Requires every member to carry the identical calendar already.
Ensemble make_ensemble(std::vector<Series> members);

struct AlignmentReport {
    Ensemble ensemble;
    std::vector<std::pair<std::string, double>> rejected;  ///< id, missing fraction
    std::size_t dropped_dates = 0;  ///< union-calendar dates absent from the final calendar
};

/// Inner-join alignment: keeps dates present in every accepted member; a member
/// missing more than max_missing_frac of the union calendar is rejected (and
/// reported) rather than interpolated.
AlignmentReport align_series(std::vector<Series> members, double max_missing_frac = 0.05);

struct WindowSpec {
    int length = 252;
    int step = 63;
};

struct WindowIndex {
    std::ptrdiff_t start = 0;
    std::ptrdiff_t end = 0;  ///< exclusive; end - start == WindowSpec.length
    Date label_date{};       ///< date of the middle element (offset start + length/2)
};

/// Sliding windows at offsets 0, step, 2*step, ...; a trailing partial window
/// is discarded. The size-only overload leaves label_date default-initialized.
std::vector<WindowIndex> windows(std::size_t n, const WindowSpec& spec);
std::vector<WindowIndex> windows(std::span<const Date> calendar, const WindowSpec& spec);

/// values[k] = ln(prices[k+1] / prices[k]); dates are prices.dates[1..].
Series log_returns(const Series& prices);
Ensemble log_returns(const Ensemble& prices);

enum class UnitRootRejection { None, TenPercent, FivePercent, OnePercent };
const char* to_string(UnitRootRejection level);

struct AdfResult {
    double statistic = 0.0;
    UnitRootRejection reject_unit_root_at = UnitRootRejection::None;
};

/// Augmented Dickey-Fuller t-test, constant-only specification, fixed number
/// of lagged-difference terms. Critical values come from a Monte Carlo
/// calibration of the null distribution (see tools/adf_calibrate.cpp).
AdfResult adf_stationarity(std::span<const double> values, int max_lag = 1);
AdfResult adf_stationarity(const Series& s, int max_lag = 1);

}  // namespace csig
