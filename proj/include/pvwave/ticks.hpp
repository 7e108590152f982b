#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pvwave/dates.hpp"

namespace pvwave {

/// One trade print. Prices carry exactly three fractional digits and are
/// stored in integer milli-units to keep binning exact.
struct TickRecord {
    Date day;
    int time_s = 0;               // seconds of day
    std::int64_t price_milli = 0; // price * 1000, > 0
    std::int64_t volume = 0;      // shares, >= 1
};

/// All ticks of one trading day, in file order.
struct DayTicks {
    Date day;
    std::vector<TickRecord> ticks;
};

struct Bin {
    std::int64_t price_milli = 0;
    std::int64_t volume = 0;
    double probability = 0.0;

    double price() const { return static_cast<double>(price_milli) / 1000.0; }
};

/// Per-day volume-probability distribution over price bins.
/// Invariants: probabilities sum to 1 (1e-12), all > 0, bins strictly
/// increasing and integer multiples of tick_milli.
struct DailyVolumeDistribution {
    Date day;
    std::int64_t tick_milli = 10; // bin width (10 = 0.01 currency units)
    std::vector<Bin> bins;
    std::int64_t total_volume = 0;
    double session_seconds = 14400.0;
};

struct RowError {
    std::size_t line = 0;
    std::string message;
};

struct ParseOptions {
    bool fail_fast = true;        // throw on first bad row instead of skipping
    bool session_filter = false;  // drop rows outside the session window
    int session_open_s = 9 * 3600 + 30 * 60;
    double session_seconds = 14400.0;
};

struct ParseResult {
    std::vector<DayTicks> days;   // grouped by day, file order preserved
    std::vector<RowError> errors; // skipped rows when fail_fast is off
};

/// Parse the tick CSV (header `date,time,price,volume`).
/// Throws std::runtime_error on header mismatch; row handling per options.
ParseResult parse_ticks(std::istream& in, const ParseOptions& options = {});

/// Write ticks in the same CSV format (round-trip identity on valid records).
void emit_ticks(std::ostream& out, std::span<const DayTicks> days);

/// Round a price to the nearest multiple of tick_milli, half away from zero.
std::int64_t round_to_tick(std::int64_t price_milli, std::int64_t tick_milli);

/// Bin one day of ticks at the given bin width.
/// Throws std::invalid_argument on an empty tick set or mixed days.
DailyVolumeDistribution bin_day(std::span<const TickRecord> ticks, std::int64_t tick_milli,
                                double session_seconds = 14400.0);

/// Volume-weighted mean price over raw ticks (currency units).
double volume_weighted_mean_price(std::span<const TickRecord> ticks);

} // namespace pvwave
