#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace csig {

/// Calendar date stored as a count of days since 1970-01-01.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, int month, int day);

    /// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
    static Date parse_iso(const std::string& text);

    std::string to_iso() const;
    std::int32_t days_since_epoch() const { return days_; }

    Date operator+(int days) const { return Date(days_ + days); }
    Date operator-(int days) const { return Date(days_ - days); }
    int operator-(Date other) const { return days_ - other.days_; }

    auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

}  // namespace csig
