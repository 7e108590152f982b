#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pvwave/analysis.hpp"
#include "pvwave/pipeline.hpp"
#include "pvwave/synth.hpp"

namespace pvwave {

/// Batch-run configuration. Every field has a printable default so a run is
/// reproducible from `--print-config` output alone.
struct RunConfig {
    std::string input;
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    double coarse_tick = 0.01;
    double fine_tick = 0.005;
    double alpha = 0.05;
    std::string df_convention = "paper";  // paper | conventional
    int degenerate_floor = 5;
    int superposition_floor = 8;
    double session_hours = 4.0;
    std::string session_open = "09:30:00";
    bool session_filter = false;
    bool fail_fast = true;
    bool parallel = true;

    int lm_max_iterations = 200;
    double lm_lambda0 = 1e-3;
    double lm_lambda_up = 10.0;
    double lm_lambda_down = 0.1;

    std::vector<RegimeSpec> regimes;

    int sim_days = 200;
    double sim_mixture[4] = {0.70, 0.15, 0.10, 0.05};
    double sim_rho = 0.0;
    int sim_ticks_per_day = 100000;
    double sim_base_price = 10.0;
    std::int64_t sim_base_volume = 360000000;
    double sim_return_sigma = 0.02;
    double sim_volume_sigma = 0.10;
    std::string sim_start_date = "2007-04-02";

    double verify_t_tol = 0.005;
    double verify_tcrit_tol = 0.005;
    double verify_tcrit_tol_rounded = 0.01;
};

/// Parse `key = value` lines (# comments, blank lines allowed; `regime =
/// LABEL,START,END` may repeat). Unknown keys are an error.
void load_config_file(const std::string& path, RunConfig& config);

/// Apply a single key=value assignment (same keys as the file).
void apply_config_entry(const std::string& key, const std::string& value, RunConfig& config);

void print_config(std::ostream& out, const RunConfig& config);

PipelineConfig make_pipeline_config(const RunConfig& config);
CorpusSpec make_corpus_spec(const RunConfig& config);

} // namespace pvwave
