#include "pvwave/dates.hpp"

#include <cstdio>

namespace pvwave {

std::int64_t days_from_civil(const Date& d) {
    // Howard Hinnant's civil-days algorithm.
    std::int64_t y = d.year;
    const int m = d.month;
    const int dd = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(dd)};
}

int weekday(const Date& d) {
    const std::int64_t z = days_from_civil(d);
    return static_cast<int>(((z % 7) + 11) % 7);  // 1970-01-01 was a Thursday
}

Date next_trading_day(const Date& d) {
    Date n = civil_from_days(days_from_civil(d) + 1);
    while (true) {
        const int w = weekday(n);
        if (w != 0 && w != 6) return n;
        n = civil_from_days(days_from_civil(n) + 1);
    }
}

Date parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 || s.size() != 10)
        throw std::invalid_argument("malformed date: '" + s + "'");
    if (m < 1 || m > 12 || d < 1 || d > 31)
        throw std::invalid_argument("date out of range: '" + s + "'");
    return Date{y, m, d};
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

int parse_time_of_day(const std::string& s) {
    int h = 0, m = 0, sec = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%2d:%2d:%2d%c", &h, &m, &sec, &extra) != 3 || s.size() != 8)
        throw std::invalid_argument("malformed time: '" + s + "'");
    if (h < 0 || h > 23 || m < 0 || m > 59 || sec < 0 || sec > 59)
        throw std::invalid_argument("time out of range: '" + s + "'");
    return h * 3600 + m * 60 + sec;
}

std::string format_time_of_day(int seconds) {
    if (seconds < 0 || seconds >= 24 * 3600) throw std::invalid_argument("seconds of day out of range");
    char buf[12];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60, seconds % 60);
    return buf;
}

} // namespace pvwave
