#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvwave/dates.hpp"
#include "pvwave/ticks.hpp"

namespace pvwave {

enum class SynthFamily { bessel, two_bessel, kummer1, uniform };

std::string synth_family_name(SynthFamily family);
SynthFamily parse_synth_family(const std::string& name);

/// Recipe for one synthetic trading day. Tick prices are drawn from the
/// family's normalized |model| over the price grid; timestamps are uniform
/// over the session. Identical spec + seed reproduces byte-identical ticks.
struct SynthDaySpec {
    SynthFamily family = SynthFamily::bessel;
    std::vector<double> true_params;  // bessel/kummer1 {C, omega|sqrtA, p0}; two_bessel 6; uniform {}
    int n_ticks = 100000;
    std::int64_t grid_min_milli = 9800;
    std::int64_t grid_max_milli = 10200;
    std::int64_t tick_milli = 10;
    std::uint64_t seed = 0;
    std::int64_t volume_per_tick = 1;
    double shape_noise_sigma = 0.0;  // lognormal per-bin weight jitter
    Date day{2007, 4, 2};
    int session_open_s = 9 * 3600 + 30 * 60;
    double session_seconds = 14400.0;
};

/// Throws std::domain_error when the model is all-zero on the grid.
std::vector<TickRecord> synth_day(const SynthDaySpec& spec);

/// Per-family shape defaults used by synth_corpus (tuned once, fixed).
struct FamilyShapeDefaults {
    double bessel_C = 0.2;
    double bessel_omega = 50.0;
    double bessel_halfspan = 0.20;       // grid half-width around p0

    double two_bessel_C = 0.2;
    double two_bessel_omega = 150.0;
    double two_bessel_separation = 0.20; // distance between the two centers
    double two_bessel_halfspan = 0.35;
    double two_bessel_noise = 0.0;

    double kummer_C = 0.3;
    double kummer_sqrtA = 300.0;
    double kummer_halfspan = 0.03;
    double kummer_noise = 0.0;

    double uniform_halfspan = 0.10;
};

struct CorpusSpec {
    int day_count = 200;
    double mixture[4] = {0.70, 0.15, 0.10, 0.05};  // bessel, two_bessel, kummer1, uniform
    double rho = 0.0;             // planted correlation between returns and volume changes
    double sigma_return = 0.02;
    double sigma_volume = 0.10;
    double base_price = 10.0;
    std::int64_t base_volume = 360000000;
    int n_ticks = 100000;
    std::uint64_t seed = 1;
    Date start_date{2007, 4, 2};
    int session_open_s = 9 * 3600 + 30 * 60;
    double session_seconds = 14400.0;
    FamilyShapeDefaults shapes;
};

/// Planted per-day ground truth emitted alongside the ticks.
struct TruthRow {
    Date day;
    SynthFamily family = SynthFamily::bessel;
    double p0 = 0.0;
    std::string params_json;
    std::int64_t total_volume = 0;
};

struct Corpus {
    std::vector<DayTicks> days;
    std::vector<TruthRow> truth;
};

/// Multi-day corpus with planted class mixture and a planted correlation
/// between equilibrium-price returns and total-volume changes. The pair
/// series is constructed so its sample correlation equals rho exactly
/// (orthogonalized Gaussian construction), up to integer volume rounding.
/// Throws std::domain_error for |rho| > 1 or a mixture that does not sum
/// to 1, and std::invalid_argument for day_count < 2.
Corpus synth_corpus(const CorpusSpec& spec);

void emit_truth(std::ostream& out, std::span<const TruthRow> rows);

} // namespace pvwave
