#include "pvwave/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pvwave/specfun.hpp"

namespace pvwave {

double mean_return(double p0_prev, double p0_curr) {
    if (!(p0_prev > 0.0)) throw std::domain_error("mean_return: previous equilibrium price <= 0");
    return (p0_curr - p0_prev) / p0_prev;
}

double volume_change(double v_prev, double v_curr) {
    if (!(v_prev > 0.0)) throw std::domain_error("volume_change: previous volume <= 0");
    return (v_curr - v_prev) / v_prev;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("pearson: length mismatch");
    if (n < 3) throw std::invalid_argument("pearson: need n >= 3");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::domain_error("pearson: correlation undefined for a constant sequence");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

CorrTest corr_t_test(double r, int n, double alpha) {
    if (n < 3) throw std::domain_error("corr_t_test: need n >= 3");
    if (std::fabs(r) > 1.0) throw std::domain_error("corr_t_test: |r| > 1");
    CorrTest out;
    out.t_crit = student_t_critical(alpha, n - 2);
    if (std::fabs(r) == 1.0) {
        out.t = std::numeric_limits<double>::infinity();
        out.significant = true;
        return out;
    }
    out.t = std::fabs(r) / std::sqrt((1.0 - r * r) / (n - 2));
    out.significant = out.t > out.t_crit;
    return out;
}

std::vector<DayPairObservation> build_pairs(std::span<const EquilibriumPoint> series) {
    std::vector<DayPairObservation> pairs;
    for (std::size_t i = 1; i < series.size(); ++i) {
        DayPairObservation obs;
        obs.prev_day = series[i - 1].day;
        obs.curr_day = series[i].day;
        obs.mean_return = mean_return(series[i - 1].p0, series[i].p0);
        obs.volume_change = volume_change(static_cast<double>(series[i - 1].volume),
                                          static_cast<double>(series[i].volume));
        obs.spans_skipped_day = series[i].corpus_index - series[i - 1].corpus_index > 1;
        pairs.push_back(obs);
    }
    return pairs;
}

namespace {

bool in_regime(const Date& d, const RegimeSpec& spec) { return spec.start <= d && d <= spec.end; }

RegimeRow make_row(const std::string& label, const Date& start, const Date& end,
                   std::span<const DayPairObservation> pairs,
                   std::span<const EquilibriumPoint> series, double alpha, bool whole_sample,
                   const RegimeSpec* spec) {
    RegimeRow row;
    row.label = label;
    row.start = start;
    row.end = end;
    std::vector<double> ret, dvol;
    for (const auto& p : pairs) {
        const bool take = whole_sample || in_regime(p.curr_day, *spec);
        if (!take) continue;
        ret.push_back(p.mean_return);
        dvol.push_back(p.volume_change);
        ++row.pair_count;
        if (p.spans_skipped_day) ++row.skipped_pair_count;
    }
    for (const auto& pt : series)
        if (whole_sample || in_regime(pt.day, *spec)) ++row.day_count;

    if (row.day_count < 4 || row.pair_count < 3) {
        row.status = RegimeRowStatus::insufficient;
        return row;
    }
    try {
        row.r = pearson(ret, dvol);
    } catch (const std::domain_error&) {
        row.status = RegimeRowStatus::undefined_correlation;
        return row;
    }
    const CorrTest test = corr_t_test(row.r, row.pair_count, alpha);
    row.t = test.t;
    row.t_crit = test.t_crit;
    row.significant = test.significant;
    row.status = RegimeRowStatus::ok;
    return row;
}

} // namespace

RegimeCorrelationReport regime_report(std::span<const EquilibriumPoint> series,
                                      std::span<const RegimeSpec> regimes, double alpha) {
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        if (regimes[i].end < regimes[i].start)
            throw std::invalid_argument("regime_report: regime '" + regimes[i].label + "' ends before it starts");
        for (std::size_t j = i + 1; j < regimes.size(); ++j)
            if (!(regimes[i].end < regimes[j].start || regimes[j].end < regimes[i].start))
                throw std::invalid_argument("regime_report: regimes '" + regimes[i].label + "' and '" +
                                            regimes[j].label + "' overlap");
    }
    const std::vector<DayPairObservation> pairs = build_pairs(series);
    RegimeCorrelationReport report;
    for (const auto& spec : regimes)
        report.rows.push_back(make_row(spec.label, spec.start, spec.end, pairs, series, alpha, false, &spec));
    if (!series.empty())
        report.rows.push_back(make_row("ALL", series.front().day, series.back().day, pairs, series,
                                       alpha, true, nullptr));
    return report;
}

} // namespace pvwave
