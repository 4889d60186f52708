// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fris/config.hpp"
#include "fris/orchestrator.hpp"

namespace fris {

inline constexpr const char* kVersion = "0.1.0";

// Default sweep values when the config leaves the sweep list empty.
std::vector<double> default_sweep(ExperimentKind kind);

// Runs the configured experiment and writes <kind>.csv plus manifest.json
// into spec.out_dir. Throws on config errors (std::invalid_argument) or
// solver failures (std::runtime_error). Returns the written file paths.
std::vector<std::string> run_experiment(const ParsedConfig& cfg, int threads);

// 9-significant-digit decimal formatting used for every CSV number.
std::string format_g9(double v);

}  // namespace fris
