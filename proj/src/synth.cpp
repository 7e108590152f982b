#include "pvwave/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pvwave/models.hpp"
#include "pvwave/rng.hpp"

namespace pvwave {

std::string synth_family_name(SynthFamily family) {
    switch (family) {
        case SynthFamily::bessel: return "bessel";
        case SynthFamily::two_bessel: return "two_bessel";
        case SynthFamily::kummer1: return "kummer1";
        case SynthFamily::uniform: return "uniform";
    }
    return "?";
}

SynthFamily parse_synth_family(const std::string& name) {
    if (name == "bessel") return SynthFamily::bessel;
    if (name == "two_bessel") return SynthFamily::two_bessel;
    if (name == "kummer1") return SynthFamily::kummer1;
    if (name == "uniform") return SynthFamily::uniform;
    throw std::invalid_argument("unknown synthetic family: '" + name + "'");
}

namespace {

double model_weight(const SynthDaySpec& spec, double price) {
    const auto& tp = spec.true_params;
    switch (spec.family) {
        case SynthFamily::bessel:
            return eval_bessel(BesselParams{tp.at(0), tp.at(1), tp.at(2)}, price);
        case SynthFamily::two_bessel:
            return eval_two_bessel(
                TwoBesselParams{{tp.at(0), tp.at(1), tp.at(2)}, {tp.at(3), tp.at(4), tp.at(5)}}, price);
        case SynthFamily::kummer1:
            return eval_kummer(KummerParams{tp.at(0), tp.at(1), tp.at(2), 1}, price);
        case SynthFamily::uniform:
            return 1.0;
    }
    return 0.0;
}

} // namespace

std::vector<TickRecord> synth_day(const SynthDaySpec& spec) {
    if (spec.n_ticks < 1) throw std::invalid_argument("synth_day: n_ticks < 1");
    if (spec.tick_milli <= 0 || spec.grid_max_milli < spec.grid_min_milli)
        throw std::invalid_argument("synth_day: bad price grid");

    std::vector<std::int64_t> grid;
    for (std::int64_t p = spec.grid_min_milli; p <= spec.grid_max_milli; p += spec.tick_milli)
        grid.push_back(p);

    Rng rng(spec.seed);
    std::vector<double> weight(grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double w = model_weight(spec, static_cast<double>(grid[i]) / 1000.0);
        if (spec.shape_noise_sigma > 0.0) w *= std::exp(spec.shape_noise_sigma * rng.next_normal());
        weight[i] = w;
        total += w;
    }
    if (!(total > 0.0)) throw std::domain_error("synth_day: model is zero everywhere on the grid");

    std::vector<double> cdf(grid.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        acc += weight[i] / total;
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    std::vector<TickRecord> ticks(spec.n_ticks);
    std::vector<double> times(spec.n_ticks);
    for (int i = 0; i < spec.n_ticks; ++i) times[i] = rng.next_double() * spec.session_seconds;
    std::sort(times.begin(), times.end());
    for (int i = 0; i < spec.n_ticks; ++i) {
        const double u = rng.next_double();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min(static_cast<std::size_t>(it - cdf.begin()), grid.size() - 1);
        ticks[i].day = spec.day;
        ticks[i].time_s = spec.session_open_s + static_cast<int>(times[i]);
        ticks[i].price_milli = grid[idx];
        ticks[i].volume = spec.volume_per_tick;
    }
    return ticks;
}

namespace {

// Class counts matching the mixture exactly (largest remainder), then a
// seeded shuffle for the day order.
std::vector<SynthFamily> family_schedule(const CorpusSpec& spec, Rng& rng) {
    const int d = spec.day_count;
    int counts[4];
    double frac[4];
    int assigned = 0;
    for (int c = 0; c < 4; ++c) {
        const double exact = spec.mixture[c] * d;
        counts[c] = static_cast<int>(exact);
        frac[c] = exact - counts[c];
        assigned += counts[c];
    }
    while (assigned < d) {
        int best = 0;
        for (int c = 1; c < 4; ++c)
            if (frac[c] > frac[best]) best = c;
        ++counts[best];
        frac[best] = -1.0;
        ++assigned;
    }
    std::vector<SynthFamily> schedule;
    schedule.reserve(d);
    const SynthFamily fams[4] = {SynthFamily::bessel, SynthFamily::two_bessel, SynthFamily::kummer1,
                                 SynthFamily::uniform};
    for (int c = 0; c < 4; ++c) schedule.insert(schedule.end(), counts[c], fams[c]);
    for (std::size_t i = schedule.size(); i > 1; --i)
        std::swap(schedule[i - 1], schedule[rng.next_below(i)]);
    return schedule;
}

// Standardize to zero mean, unit population variance.
void standardize(std::vector<double>& v) {
    const std::size_t n = v.size();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= n;
    const double sd = std::sqrt(var);
    for (double& x : v) x = (x - mean) / sd;
}

std::string json_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

Corpus synth_corpus(const CorpusSpec& spec) {
    if (spec.day_count < 2) throw std::invalid_argument("synth_corpus: day_count < 2");
    if (std::fabs(spec.rho) > 1.0) throw std::domain_error("synth_corpus: |rho| > 1");
    double mix_sum = 0.0;
    for (double m : spec.mixture) {
        if (m < 0.0) throw std::domain_error("synth_corpus: negative mixture proportion");
        mix_sum += m;
    }
    if (std::fabs(mix_sum - 1.0) > 1e-9) throw std::domain_error("synth_corpus: mixture must sum to 1");

    Rng rng(derive_seed(spec.seed, 0xC0FFEE));
    const std::vector<SynthFamily> schedule = family_schedule(spec, rng);

    // Pair series with sample correlation exactly rho: y = rho*x + sqrt(1-rho^2)*e
    // with x standardized and e orthogonalized against x, both unit variance.
    const int pairs = spec.day_count - 1;
    std::vector<double> x(pairs), e(pairs);
    for (int i = 0; i < pairs; ++i) x[i] = rng.next_normal();
    for (int i = 0; i < pairs; ++i) e[i] = rng.next_normal();
    if (pairs >= 3) {
        standardize(x);
        double mean_e = 0.0;
        for (double v : e) mean_e += v;
        mean_e /= pairs;
        for (double& v : e) v -= mean_e;
        double dot = 0.0;
        for (int i = 0; i < pairs; ++i) dot += e[i] * x[i];
        dot /= pairs;
        for (int i = 0; i < pairs; ++i) e[i] -= dot * x[i];
        standardize(e);
    }
    const double rho_c = std::sqrt(std::max(0.0, 1.0 - spec.rho * spec.rho));
    std::vector<double> ret(pairs), dvol(pairs);
    for (int i = 0; i < pairs; ++i) {
        ret[i] = std::max(-0.5, spec.sigma_return * x[i]);
        dvol[i] = std::max(-0.8, spec.sigma_volume * (spec.rho * x[i] + rho_c * e[i]));
    }

    Corpus corpus;
    corpus.days.reserve(spec.day_count);
    corpus.truth.reserve(spec.day_count);
    Date day = spec.start_date;
    double p0 = spec.base_price;
    double volume_target = static_cast<double>(spec.base_volume);
    const auto& sh = spec.shapes;

    for (int t = 0; t < spec.day_count; ++t) {
        if (t > 0) {
            p0 *= 1.0 + ret[t - 1];
            volume_target *= 1.0 + dvol[t - 1];
            day = next_trading_day(day);
        }
        SynthDaySpec ds;
        ds.family = schedule[t];
        ds.n_ticks = spec.n_ticks;
        ds.tick_milli = 10;
        ds.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(t) + 1);
        ds.volume_per_tick = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(volume_target / spec.n_ticks)));
        ds.day = day;
        ds.session_open_s = spec.session_open_s;
        ds.session_seconds = spec.session_seconds;

        const auto snap = [](double price) { return static_cast<std::int64_t>(std::llround(price * 1000.0)); };
        char js[256];
        switch (ds.family) {
            case SynthFamily::bessel:
                ds.true_params = {sh.bessel_C, sh.bessel_omega, p0};
                ds.grid_min_milli = snap(p0 - sh.bessel_halfspan);
                ds.grid_max_milli = snap(p0 + sh.bessel_halfspan);
                std::snprintf(js, sizeof js, "{\"C\":%s,\"omega\":%s,\"p0\":%s}",
                              json_number(sh.bessel_C).c_str(),
                              json_number(sh.bessel_omega).c_str(), json_number(p0).c_str());
                break;
            case SynthFamily::two_bessel: {
                const double lo = p0 - 0.5 * sh.two_bessel_separation;
                const double hi = p0 + 0.5 * sh.two_bessel_separation;
                ds.true_params = {sh.two_bessel_C, sh.two_bessel_omega, lo,
                                  sh.two_bessel_C, sh.two_bessel_omega, hi};
                ds.grid_min_milli = snap(p0 - sh.two_bessel_halfspan);
                ds.grid_max_milli = snap(p0 + sh.two_bessel_halfspan);
                ds.shape_noise_sigma = sh.two_bessel_noise;
                std::snprintf(js, sizeof js,
                              "{\"C1\":%s,\"omega1\":%s,\"p01\":%s,\"C2\":%s,\"omega2\":%s,\"p02\":%s}",
                              json_number(sh.two_bessel_C).c_str(),
                              json_number(sh.two_bessel_omega).c_str(), json_number(lo).c_str(),
                              json_number(sh.two_bessel_C).c_str(),
                              json_number(sh.two_bessel_omega).c_str(), json_number(hi).c_str());
                break;
            }
            case SynthFamily::kummer1:
                ds.true_params = {sh.kummer_C, sh.kummer_sqrtA, p0};
                ds.grid_min_milli = snap(p0 - sh.kummer_halfspan);
                ds.grid_max_milli = snap(p0 + sh.kummer_halfspan);
                ds.shape_noise_sigma = sh.kummer_noise;
                std::snprintf(js, sizeof js, "{\"C\":%s,\"sqrtA\":%s,\"p0\":%s,\"n\":1}",
                              json_number(sh.kummer_C).c_str(),
                              json_number(sh.kummer_sqrtA).c_str(), json_number(p0).c_str());
                break;
            case SynthFamily::uniform:
                ds.true_params = {};
                ds.grid_min_milli = snap(p0 - sh.uniform_halfspan);
                ds.grid_max_milli = snap(p0 + sh.uniform_halfspan);
                std::snprintf(js, sizeof js, "{}");
                break;
        }
        DayTicks dt;
        dt.day = day;
        dt.ticks = synth_day(ds);
        std::int64_t realized = 0;
        for (const auto& tick : dt.ticks) realized += tick.volume;
        corpus.days.push_back(std::move(dt));
        corpus.truth.push_back(TruthRow{day, ds.family, p0, js, realized});
    }
    return corpus;
}

void emit_truth(std::ostream& out, std::span<const TruthRow> rows) {
    out << "date,family,p0,params_json,total_volume\n";
    char buf[256];
    for (const auto& r : rows) {
        // params_json holds commas and quotes: CSV-quote the field and double
        // the embedded quotes
        std::string quoted = "\"";
        for (char c : r.params_json) {
            quoted += c;
            if (c == '"') quoted += c;
        }
        quoted += '"';
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f,", format_date(r.day).c_str(),
                      synth_family_name(r.family).c_str(), r.p0);
        out << buf << quoted << ',' << r.total_volume << '\n';
    }
}

} // namespace pvwave
