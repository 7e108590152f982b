#pragma once

#include <span>
#include <string>
#include <vector>

#include "pvwave/dates.hpp"
#include "pvwave/pipeline.hpp"

namespace pvwave {

/// r = (p0_curr - p0_prev) / p0_prev; throws std::domain_error for p0_prev <= 0.
double mean_return(double p0_prev, double p0_curr);

/// dV = (v_curr - v_prev) / v_prev; throws std::domain_error for v_prev <= 0.
double volume_change(double v_prev, double v_curr);

/// Sample Pearson correlation; needs equal lengths, n >= 3, both non-constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrTest {
    double t = 0.0;
    double t_crit = 0.0;
    bool significant = false;
};

/// t = |r| / sqrt((1 - r^2)/(n - 2)) against t_crit(alpha, n - 2);
/// |r| = 1 maps to t = +inf (significant). Throws for n < 3 or |r| > 1.
CorrTest corr_t_test(double r, int n, double alpha);

struct DayPairObservation {
    Date prev_day;
    Date curr_day;
    double mean_return = 0.0;
    double volume_change = 0.0;
    bool spans_skipped_day = false;  // adjacent usable days were not corpus-adjacent
};

struct RegimeSpec {
    std::string label;
    Date start;
    Date end;  // closed interval
};

enum class RegimeRowStatus { ok, insufficient, undefined_correlation };

struct RegimeRow {
    std::string label;
    Date start;
    Date end;
    int day_count = 0;
    int pair_count = 0;
    int skipped_pair_count = 0;
    double r = 0.0;
    double t = 0.0;
    double t_crit = 0.0;
    bool significant = false;
    RegimeRowStatus status = RegimeRowStatus::insufficient;
};

struct RegimeCorrelationReport {
    std::vector<RegimeRow> rows;  // one per regime, then the whole-sample row
};

std::vector<DayPairObservation> build_pairs(std::span<const EquilibriumPoint> series);

/// Per-regime correlation rows plus a whole-sample row labelled "ALL".
/// Pairs belong to the regime containing their later day; regimes must not
/// overlap. Regimes with fewer than 4 usable days are flagged insufficient
/// rather than omitted.
RegimeCorrelationReport regime_report(std::span<const EquilibriumPoint> series,
                                      std::span<const RegimeSpec> regimes, double alpha);

} // namespace pvwave
