#pragma once

#include <span>
#include <vector>

#include "pvwave/models.hpp"
#include "pvwave/ticks.hpp"

namespace pvwave {

/// Degrees-of-freedom bookkeeping for the significance test.
/// paper: k = 1 for the single-Bessel and Kummer regressions, k = 2 for the
/// two-Bessel superposition. conventional: k = parameter count - 1.
enum class DfConvention { paper, conventional };

int df_k(ModelFamily family, DfConvention convention);

struct FitOptions {
    int max_iterations = 200;
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 0.1;
    double lambda_max = 1e12;
    double rss_rel_tol = 1e-12;  // converged when accepted-step RSS change falls below
    double grad_tol = 1e-10;     // or when max-norm of J^T r falls below
    double alpha = 0.05;
    DfConvention df_convention = DfConvention::paper;
};

struct Goodness {
    double r2 = 0.0;
    double f_stat = 0.0;
    double r2_crit = 0.0;
    bool significant = false;
};

struct FitResult {
    ModelFamily family = ModelFamily::bessel;
    std::vector<double> params;
    double rss = 0.0;
    double ess = 0.0;
    double tss = 0.0;
    double r2 = 0.0;
    double f_stat = 0.0;
    double r2_crit = 0.0;
    bool significant = false;
    int iterations = 0;
    bool converged = false;
    bool failed = false;  // singular normal equations after full lambda escalation
    int n_bins = 0;
    int k = 0;
    std::vector<double> rss_trace;  // RSS after each accepted step
};

/// R^2, F, and the critical R^2 at the given significance level.
/// F uses the regression identity ESS = TSS - RSS so that the decisions
/// R^2 > R^2_crit and F > F_crit coincide exactly. A zero TSS (constant
/// observations) yields R^2 = 0, F = 0, not significant.
Goodness goodness(std::span<const double> y, std::span<const double> yhat, int k, double alpha);

/// Levenberg-Marquardt least squares of the family against the bin
/// probabilities. Requires bins >= param_count + 2. Damping grows on
/// rejected steps and shrinks on accepted ones; C, omega/sqrtA, p0 are kept
/// positive by projection after each step. Hitting max_iterations returns
/// converged = false; an unsolvable normal system after full lambda
/// escalation returns failed = true. Neither case throws.
FitResult lm_fit(ModelFamily family, const DailyVolumeDistribution& dist,
                 std::span<const double> init, const FitOptions& options);

/// Peak-anchored initializer: p0 at the modal bin (volume-weighted mean over
/// ties), C at the modal probability, omega from the first-lobe half-width
/// (first bin below 0.05*C), clamped to [1, 1e4].
BesselParams init_bessel(const DailyVolumeDistribution& dist);

/// Seeds the two components from the two highest local maxima separated by
/// at least 3 bins; falls back to a single-Bessel pre-fit plus the residual
/// peak when no such pair exists.
TwoBesselParams init_two_bessel(const DailyVolumeDistribution& dist, const FitOptions& options);

/// p0/C as init_bessel; sqrtA from the reciprocal volume-weighted mean
/// absolute price deviation, clamped to [1, 1e4].
KummerParams init_kummer(const DailyVolumeDistribution& dist);

/// Number of interior local maxima of the binned probabilities (diagnostic).
int count_local_maxima(const DailyVolumeDistribution& dist);

std::vector<double> pack_params(const BesselParams& p);
std::vector<double> pack_params(const TwoBesselParams& p);
std::vector<double> pack_params(const KummerParams& p);

} // namespace pvwave
