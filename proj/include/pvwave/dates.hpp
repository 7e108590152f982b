#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pvwave {

/// Calendar date (proleptic Gregorian).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

/// Days since 1970-01-01 (negative before).
std::int64_t days_from_civil(const Date& d);

/// Inverse of days_from_civil.
Date civil_from_days(std::int64_t z);

/// 0 = Sunday ... 6 = Saturday.
int weekday(const Date& d);

/// Next calendar day that is not a Saturday or Sunday.
Date next_trading_day(const Date& d);

/// Parse "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
Date parse_date(const std::string& s);

/// Format as "YYYY-MM-DD".
std::string format_date(const Date& d);

/// Parse "HH:MM:SS" into seconds of day; throws std::invalid_argument.
int parse_time_of_day(const std::string& s);

/// Format seconds of day as "HH:MM:SS".
std::string format_time_of_day(int seconds);

} // namespace pvwave
