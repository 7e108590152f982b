#include "pvwave/models.hpp"

#include <cmath>
#include <stdexcept>

#include "pvwave/specfun.hpp"

namespace pvwave {

double eval_bessel(const BesselParams& params, double p) {
    return params.C * std::fabs(bessel_j0(params.omega * (p - params.p0)));
}

double eval_two_bessel(const TwoBesselParams& params, double p) {
    return eval_bessel(params.a, p) + eval_bessel(params.b, p);
}

double eval_kummer(const KummerParams& params, double p) {
    const double d = std::fabs(p - params.p0);
    return params.C * std::exp(-params.sqrtA * d) * std::fabs(laguerre(params.n, 2.0 * params.sqrtA * d));
}

std::string family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::bessel: return "bessel";
        case ModelFamily::two_bessel: return "two_bessel";
        case ModelFamily::kummer: return "kummer";
    }
    return "?";
}

int param_count(ModelFamily family) {
    switch (family) {
        case ModelFamily::bessel: return 3;
        case ModelFamily::two_bessel: return 6;
        case ModelFamily::kummer: return 3;
    }
    return 0;
}

double eval_model(ModelFamily family, std::span<const double> params, double p) {
    switch (family) {
        case ModelFamily::bessel:
            return eval_bessel(BesselParams{params[0], params[1], params[2]}, p);
        case ModelFamily::two_bessel:
            return eval_two_bessel(TwoBesselParams{{params[0], params[1], params[2]},
                                                   {params[3], params[4], params[5]}},
                                   p);
        case ModelFamily::kummer:
            return eval_kummer(KummerParams{params[0], params[1], params[2], 1}, p);
    }
    throw std::invalid_argument("eval_model: unknown family");
}

void numeric_jacobian(ModelFamily family, std::span<const double> params, double p,
                      std::span<double> out) {
    const int m = param_count(family);
    if (static_cast<int>(params.size()) < m || static_cast<int>(out.size()) < m)
        throw std::invalid_argument("numeric_jacobian: bad spans");
    double theta[6];
    for (int j = 0; j < m; ++j) theta[j] = params[j];
    const double f0 = eval_model(family, {theta, theta + m}, p);
    const bool near_zero = f0 <= 1e-12;
    for (int j = 0; j < m; ++j) {
        const double h = std::max(1e-6 * std::fabs(theta[j]), 1e-9);
        const double saved = theta[j];
        theta[j] = saved + h;
        const double fp = eval_model(family, {theta, theta + m}, p);
        if (near_zero) {
            out[j] = (fp - f0) / h;
        } else {
            theta[j] = saved - h;
            const double fm = eval_model(family, {theta, theta + m}, p);
            out[j] = (fp - fm) / (2.0 * h);
        }
        theta[j] = saved;
    }
}

ForceReport compute_forces(const std::optional<BesselParams>& bessel_fit,
                           const std::optional<KummerParams>& kummer_fit,
                           const DailyVolumeDistribution& dist) {
    if (!(dist.session_seconds > 0.0)) throw std::domain_error("compute_forces: session_seconds <= 0");
    if (dist.total_volume <= 0) throw std::domain_error("compute_forces: total_volume <= 0");
    ForceReport report;
    const double v = static_cast<double>(dist.total_volume);
    const double t = dist.session_seconds;
    report.trading_momentum = v / t;
    report.momentum_force = v / (t * t);

    std::optional<double> p0;
    if (bessel_fit)
        p0 = bessel_fit->p0;
    else if (kummer_fit)
        p0 = kummer_fit->p0;
    if (p0) {
        report.liquidity_utility = *p0 * report.momentum_force;
        report.interactive_utility = *p0 * report.trading_momentum * report.trading_momentum / v;
    }
    if (bessel_fit) report.agreement_force = bessel_fit->omega * bessel_fit->omega;
    if (kummer_fit) {
        report.reversal_force = kummer_fit->sqrtA * kummer_fit->sqrtA;
        if (report.liquidity_utility)
            report.eigen_sqrtA = *report.liquidity_utility / (1.0 + 2.0 * kummer_fit->n);
    }
    if (report.agreement_force && report.reversal_force)
        report.momentum_force_inferred = *report.agreement_force + *report.reversal_force;
    return report;
}

} // namespace pvwave
