#include "pvwave/ticks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace pvwave {

namespace {

bool split4(const std::string& line, std::string out[4]) {
    std::size_t start = 0;
    int field = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field >= 4) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == 4;
}

// price with exactly three fractional digits -> milli units
std::int64_t parse_price_milli(const std::string& s) {
    const auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || s.size() - dot - 1 != 3)
        throw std::invalid_argument("price must have exactly 3 fractional digits: '" + s + "'");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == dot) continue;
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("non-numeric price: '" + s + "'");
    }
    std::int64_t whole = 0;
    for (std::size_t i = 0; i < dot; ++i) whole = whole * 10 + (s[i] - '0');
    std::int64_t frac = 0;
    for (std::size_t i = dot + 1; i < s.size(); ++i) frac = frac * 10 + (s[i] - '0');
    return whole * 1000 + frac;
}

std::int64_t parse_volume(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty volume");
    std::int64_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("non-numeric volume: '" + s + "'");
        v = v * 10 + (c - '0');
        if (v > (std::int64_t{1} << 62)) throw std::invalid_argument("volume overflow: '" + s + "'");
    }
    if (v < 1) throw std::invalid_argument("volume must be >= 1: '" + s + "'");
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

ParseResult parse_ticks(std::istream& in, const ParseOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("tick CSV: empty stream, missing header");
    if (strip_cr(line) != "date,time,price,volume")
        throw std::runtime_error("tick CSV: header mismatch, expected 'date,time,price,volume'");

    ParseResult result;
    std::map<std::int64_t, std::size_t> day_index; // civil day -> slot in result.days
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        try {
            std::string f[4];
            if (!split4(line, f)) throw std::invalid_argument("expected 4 comma-separated fields");
            TickRecord rec;
            rec.day = parse_date(f[0]);
            rec.time_s = parse_time_of_day(f[1]);
            rec.price_milli = parse_price_milli(f[2]);
            rec.volume = parse_volume(f[3]);
            if (rec.price_milli <= 0) throw std::invalid_argument("price must be positive");
            if (options.session_filter) {
                const int off = rec.time_s - options.session_open_s;
                if (off < 0 || off >= static_cast<int>(options.session_seconds))
                    throw std::invalid_argument("tick outside session window");
            }
            const std::int64_t key = days_from_civil(rec.day);
            auto it = day_index.find(key);
            if (it == day_index.end()) {
                day_index.emplace(key, result.days.size());
                result.days.push_back(DayTicks{rec.day, {}});
                it = day_index.find(key);
            }
            result.days[it->second].ticks.push_back(rec);
        } catch (const std::exception& e) {
            if (options.fail_fast)
                throw std::runtime_error("tick CSV line " + std::to_string(line_no) + ": " + e.what());
            result.errors.push_back(RowError{line_no, e.what()});
        }
    }
    return result;
}

void emit_ticks(std::ostream& out, std::span<const DayTicks> days) {
    out << "date,time,price,volume\n";
    char buf[64];
    for (const auto& day : days) {
        for (const auto& t : day.ticks) {
            std::snprintf(buf, sizeof buf, "%s,%s,%lld.%03lld,%lld\n", format_date(t.day).c_str(),
                          format_time_of_day(t.time_s).c_str(),
                          static_cast<long long>(t.price_milli / 1000),
                          static_cast<long long>(t.price_milli % 1000),
                          static_cast<long long>(t.volume));
            out << buf;
        }
    }
}

std::int64_t round_to_tick(std::int64_t price_milli, std::int64_t tick_milli) {
    // round half up on the decimal representation; prices are positive
    return (2 * price_milli + tick_milli) / (2 * tick_milli) * tick_milli;
}

DailyVolumeDistribution bin_day(std::span<const TickRecord> ticks, std::int64_t tick_milli,
                                double session_seconds) {
    if (ticks.empty()) throw std::invalid_argument("bin_day: empty tick set");
    if (tick_milli <= 0) throw std::invalid_argument("bin_day: non-positive tick size");
    DailyVolumeDistribution dist;
    dist.day = ticks.front().day;
    dist.tick_milli = tick_milli;
    dist.session_seconds = session_seconds;

    std::map<std::int64_t, std::int64_t> volume_by_bin;
    std::int64_t total = 0;
    for (const auto& t : ticks) {
        if (t.day != dist.day) throw std::invalid_argument("bin_day: ticks from multiple days");
        volume_by_bin[round_to_tick(t.price_milli, tick_milli)] += t.volume;
        total += t.volume;
    }
    dist.total_volume = total;
    dist.bins.reserve(volume_by_bin.size());
    for (const auto& [price, volume] : volume_by_bin)
        dist.bins.push_back(Bin{price, volume, static_cast<double>(volume) / static_cast<double>(total)});
    return dist;
}

double volume_weighted_mean_price(std::span<const TickRecord> ticks) {
    if (ticks.empty()) throw std::invalid_argument("volume_weighted_mean_price: empty tick set");
    long double pv = 0.0L, v = 0.0L;
    for (const auto& t : ticks) {
        pv += static_cast<long double>(t.price_milli) * static_cast<long double>(t.volume);
        v += static_cast<long double>(t.volume);
    }
    return static_cast<double>(pv / v / 1000.0L);
}

} // namespace pvwave
