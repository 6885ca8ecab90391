#include "csig/date.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace csig {

namespace {

// Civil-calendar conversions (proleptic Gregorian), exact for the int32 range.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1 || day > 31) {
        throw std::invalid_argument("invalid calendar date");
    }
    Date result(static_cast<std::int32_t>(days_from_civil(year, static_cast<unsigned>(month),
                                                          static_cast<unsigned>(day))));
    // Reject dates like February 30 that survive the range check above.
    int y2;
    unsigned m2, d2;
    civil_from_days(result.days_, y2, m2, d2);
    if (y2 != year || static_cast<int>(m2) != month || static_cast<int>(d2) != day) {
        throw std::invalid_argument("invalid calendar date");
    }
    return result;
}

Date Date::parse_iso(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + text + "'");
    }
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw std::invalid_argument("expected YYYY-MM-DD, got '" + text + "'");
        }
    }
    const int year = std::stoi(text.substr(0, 4));
    const int month = std::stoi(text.substr(5, 2));
    const int day = std::stoi(text.substr(8, 2));
    try {
        return from_ymd(year, month, day);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("invalid calendar date '" + text + "'");
    }
}

std::string Date::to_iso() const {
    int y;
    unsigned m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
    return buf;
}

}  // namespace csig
