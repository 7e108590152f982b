#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvwave/fitting.hpp"
#include "pvwave/ticks.hpp"

namespace pvwave {

enum class DayClass { Agreement, TwoPriceJump, ThreePriceIndependent, NoAgreementUniform, Degenerate };

std::string day_class_name(DayClass cls);

enum class EquilibriumSource { fitted, volume_weighted_mean };

struct PipelineConfig {
    std::int64_t coarse_milli = 10;
    std::int64_t fine_milli = 5;
    int degenerate_floor = 5;      // distinct coarse bins needed to attempt any fit
    int superposition_floor = 8;   // bins needed for the two-Bessel stage
    double session_seconds = 14400.0;
    FitOptions fit;
    bool parallel = true;
};

struct DayClassification {
    Date day;
    DayClass cls = DayClass::Degenerate;
    std::optional<FitResult> chosen_fit;  // absent for NoAgreementUniform/Degenerate
    std::string model_label;              // bessel_0.010 | bessel_0.005 | two_bessel | kummer_n1 | none
    double equilibrium_price = 0.0;       // 0 on an empty day
    EquilibriumSource source = EquilibriumSource::volume_weighted_mean;
    std::int64_t total_volume = 0;
    int n_bins = 0;        // bins of the accepted stage (coarse bins when none accepted)
    int peak_count = 0;    // local maxima of the coarse distribution (diagnostic)
    std::optional<TwoBesselParams> two_bessel_fit;  // both centers, for reporting
    bool empty_day = false;
};

/// Supplement-style significance cascade for one day:
/// coarse single-Bessel -> fine re-bin single-Bessel -> two-Bessel ->
/// first-order Kummer -> uniform. Days under the bin floor are Degenerate.
DayClassification classify_day(const DayTicks& day, const PipelineConfig& config);

/// Classify every day; deterministic regardless of scheduling. The parallel
/// path distributes days over OpenMP threads; the serial path is the
/// reference implementation and must produce bit-identical results.
std::vector<DayClassification> classify_corpus(std::span<const DayTicks> days,
                                               const PipelineConfig& config);
std::vector<DayClassification> classify_corpus_serial(std::span<const DayTicks> days,
                                                      const PipelineConfig& config);

struct SummaryRow {
    DayClass cls;
    int count = 0;
    double percent = 0.0;
};

/// Table-shaped per-class counts and percentages (all five classes).
std::vector<SummaryRow> summarize(std::span<const DayClassification> days);

struct EquilibriumPoint {
    Date day;
    double p0 = 0.0;
    std::int64_t volume = 0;
    std::size_t corpus_index = 0;  // position among all classified days
};

/// Ordered (day, p0, V) series over non-Degenerate days.
/// Throws std::runtime_error when fewer than 2 usable days exist.
std::vector<EquilibriumPoint> equilibrium_series(std::span<const DayClassification> days);

} // namespace pvwave
