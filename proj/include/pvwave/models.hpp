#pragma once

#include <optional>
#include <span>
#include <string>

#include "pvwave/ticks.hpp"

namespace pvwave {

/// Agreement model: C * |J0(omega * (p - p0))|.
struct BesselParams {
    double C = 0.0;
    double omega = 0.0;
    double p0 = 0.0;
};

/// Superposition of two agreement components; canonical order a.p0 < b.p0.
struct TwoBesselParams {
    BesselParams a;
    BesselParams b;
};

/// Independent-trading model: C * exp(-sqrtA*|p-p0|) * |L_n(2*sqrtA*|p-p0|)|.
struct KummerParams {
    double C = 0.0;
    double sqrtA = 0.0;
    double p0 = 0.0;
    int n = 1;
};

double eval_bessel(const BesselParams& params, double p);
double eval_two_bessel(const TwoBesselParams& params, double p);
double eval_kummer(const KummerParams& params, double p);

enum class ModelFamily { bessel, two_bessel, kummer };

std::string family_name(ModelFamily family);

/// Free parameters of the family (Kummer order n is fixed, not fitted).
int param_count(ModelFamily family);

/// Evaluate a family from its packed parameter vector:
/// bessel {C, omega, p0}; two_bessel {C1, w1, p01, C2, w2, p02};
/// kummer {C, sqrtA, p0} with n = 1.
double eval_model(ModelFamily family, std::span<const double> params, double p);

/// Central-difference partials of eval_model w.r.t. each parameter
/// (relative step 1e-6, absolute floor 1e-9). Near an interior zero of the
/// model (value <= 1e-12) the |.| crease makes the central scheme collapse,
/// so a one-sided difference is used there instead.
void numeric_jacobian(ModelFamily family, std::span<const double> params, double p,
                      std::span<double> out);

/// Day-level force and utility diagnostics.
struct ForceReport {
    double trading_momentum = 0.0;  // v_t = V / t
    double momentum_force = 0.0;    // v_tt = V / t^2
    std::optional<double> liquidity_utility;       // U = p0 * v_tt
    std::optional<double> interactive_utility;     // I = p0 * v_t^2 / V
    std::optional<double> agreement_force;         // omega^2
    std::optional<double> reversal_force;          // sqrtA^2
    std::optional<double> eigen_sqrtA;             // U / (1 + 2n)
    std::optional<double> momentum_force_inferred; // omega^2 + A
};

/// Populate the report from whichever fits exist; fields whose prerequisite
/// fit is absent stay empty.
ForceReport compute_forces(const std::optional<BesselParams>& bessel_fit,
                           const std::optional<KummerParams>& kummer_fit,
                           const DailyVolumeDistribution& dist);

} // namespace pvwave
