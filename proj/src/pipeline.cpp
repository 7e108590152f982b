#include "pvwave/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pvwave {

std::string day_class_name(DayClass cls) {
    switch (cls) {
        case DayClass::Agreement: return "Agreement";
        case DayClass::TwoPriceJump: return "TwoPriceJump";
        case DayClass::ThreePriceIndependent: return "ThreePriceIndependent";
        case DayClass::NoAgreementUniform: return "NoAgreementUniform";
        case DayClass::Degenerate: return "Degenerate";
    }
    return "?";
}

namespace {

double clamp_to_day_range(double p, std::span<const TickRecord> ticks) {
    double lo = 1e300, hi = -1e300;
    for (const auto& t : ticks) {
        const double price = static_cast<double>(t.price_milli) / 1000.0;
        lo = std::min(lo, price);
        hi = std::max(hi, price);
    }
    return std::clamp(p, lo, hi);
}

std::string stage_label(std::int64_t tick_milli) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "bessel_%.3f", static_cast<double>(tick_milli) / 1000.0);
    return buf;
}

} // namespace

DayClassification classify_day(const DayTicks& day, const PipelineConfig& config) {
    DayClassification out;
    out.day = day.day;
    if (day.ticks.empty()) {
        out.cls = DayClass::Degenerate;
        out.empty_day = true;
        out.model_label = "none";
        return out;
    }

    const DailyVolumeDistribution coarse = bin_day(day.ticks, config.coarse_milli, config.session_seconds);
    out.total_volume = coarse.total_volume;
    out.n_bins = static_cast<int>(coarse.bins.size());
    out.peak_count = count_local_maxima(coarse);
    const double vw_mean = volume_weighted_mean_price(day.ticks);

    if (static_cast<int>(coarse.bins.size()) < config.degenerate_floor) {
        out.cls = DayClass::Degenerate;
        out.model_label = "none";
        out.equilibrium_price = vw_mean;
        return out;
    }

    // stage 1: coarse bins, single Bessel
    const FitResult s1 = lm_fit(ModelFamily::bessel, coarse, pack_params(init_bessel(coarse)), config.fit);
    if (s1.significant) {
        out.cls = DayClass::Agreement;
        out.chosen_fit = s1;
        out.model_label = stage_label(config.coarse_milli);
        out.equilibrium_price = clamp_to_day_range(s1.params[2], day.ticks);
        out.source = EquilibriumSource::fitted;
        out.n_bins = s1.n_bins;
        return out;
    }

    // stage 2: refined bins, single Bessel again
    const DailyVolumeDistribution fine = bin_day(day.ticks, config.fine_milli, config.session_seconds);
    if (static_cast<int>(fine.bins.size()) >= config.degenerate_floor) {
        const FitResult s2 = lm_fit(ModelFamily::bessel, fine, pack_params(init_bessel(fine)), config.fit);
        if (s2.significant) {
            out.cls = DayClass::Agreement;
            out.chosen_fit = s2;
            out.model_label = stage_label(config.fine_milli);
            out.equilibrium_price = clamp_to_day_range(s2.params[2], day.ticks);
            out.source = EquilibriumSource::fitted;
            out.n_bins = s2.n_bins;
            return out;
        }
    }

    // stage 3: two-Bessel superposition on the refined bins
    if (static_cast<int>(fine.bins.size()) >= config.superposition_floor) {
        const FitResult s3 = lm_fit(ModelFamily::two_bessel, fine,
                                    pack_params(init_two_bessel(fine, config.fit)), config.fit);
        if (s3.significant) {
            out.cls = DayClass::TwoPriceJump;
            out.chosen_fit = s3;
            out.model_label = "two_bessel";
            out.equilibrium_price = vw_mean;
            out.source = EquilibriumSource::volume_weighted_mean;
            out.n_bins = s3.n_bins;
            TwoBesselParams tb{{s3.params[0], s3.params[1], s3.params[2]},
                               {s3.params[3], s3.params[4], s3.params[5]}};
            if (tb.a.p0 > tb.b.p0) std::swap(tb.a, tb.b);
            out.two_bessel_fit = tb;
            return out;
        }
    }

    // stage 4: first-order Kummer on the refined bins
    if (static_cast<int>(fine.bins.size()) >= config.degenerate_floor) {
        const FitResult s4 = lm_fit(ModelFamily::kummer, fine, pack_params(init_kummer(fine)), config.fit);
        if (s4.significant) {
            out.cls = DayClass::ThreePriceIndependent;
            out.chosen_fit = s4;
            out.model_label = "kummer_n1";
            out.equilibrium_price = vw_mean;
            out.source = EquilibriumSource::volume_weighted_mean;
            out.n_bins = s4.n_bins;
            return out;
        }
    }

    // stage 5: no model reaches significance
    out.cls = DayClass::NoAgreementUniform;
    out.model_label = "none";
    out.equilibrium_price = vw_mean;
    out.source = EquilibriumSource::volume_weighted_mean;
    return out;
}

std::vector<DayClassification> classify_corpus_serial(std::span<const DayTicks> days,
                                                      const PipelineConfig& config) {
    std::vector<DayClassification> out(days.size());
    for (std::size_t i = 0; i < days.size(); ++i) out[i] = classify_day(days[i], config);
    std::stable_sort(out.begin(), out.end(),
                     [](const DayClassification& a, const DayClassification& b) { return a.day < b.day; });
    return out;
}

std::vector<DayClassification> classify_corpus(std::span<const DayTicks> days,
                                               const PipelineConfig& config) {
    if (!config.parallel) return classify_corpus_serial(days, config);
    std::vector<DayClassification> out(days.size());
    std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(days.size()); ++i) {
        try {
            out[i] = classify_day(days[i], config);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    std::stable_sort(out.begin(), out.end(),
                     [](const DayClassification& a, const DayClassification& b) { return a.day < b.day; });
    return out;
}

std::vector<SummaryRow> summarize(std::span<const DayClassification> days) {
    const DayClass order[5] = {DayClass::Agreement, DayClass::TwoPriceJump,
                               DayClass::ThreePriceIndependent, DayClass::NoAgreementUniform,
                               DayClass::Degenerate};
    std::vector<SummaryRow> rows;
    const double total = static_cast<double>(days.size());
    for (DayClass cls : order) {
        SummaryRow row{cls, 0, 0.0};
        for (const auto& d : days)
            if (d.cls == cls) ++row.count;
        row.percent = total > 0 ? 100.0 * row.count / total : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::vector<EquilibriumPoint> equilibrium_series(std::span<const DayClassification> days) {
    std::vector<EquilibriumPoint> series;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (days[i].cls == DayClass::Degenerate) continue;
        series.push_back(EquilibriumPoint{days[i].day, days[i].equilibrium_price,
                                          days[i].total_volume, i});
    }
    std::sort(series.begin(), series.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) { return a.day < b.day; });
    if (series.size() < 2)
        throw std::runtime_error("equilibrium_series: fewer than 2 usable days");
    return series;
}

} // namespace pvwave
