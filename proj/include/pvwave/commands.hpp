#pragma once

#include <iosfwd>

#include "pvwave/config.hpp"

namespace pvwave {

/// Subcommand bodies shared by the CLI and the tests. Each returns a process
/// exit code (0 on success) and reports problems on `err`.

/// Generate a synthetic corpus: <out>/ticks.csv and <out>/truth.csv.
int cmd_simulate(const RunConfig& config, std::ostream& err);

/// Classify a tick file: <out>/classification.csv, <out>/summary.csv,
/// <out>/plotdata.csv. Prints the class summary (and the fitted centers of
/// two-price days) on `out`.
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Regime correlation report from a classification CSV: <out>/regimes.csv.
int cmd_correlate(const RunConfig& config, const std::string& classification_csv, std::ostream& err);

/// Self-test: Table-style t reconstruction plus special-function checks.
/// Prints one pass/fail line per check on `out`.
int cmd_verify(const RunConfig& config, std::ostream& out);

} // namespace pvwave
