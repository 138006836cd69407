#pragma once

#include <filesystem>

#include "config.hpp"

#include "anchorplan/error.hpp"

namespace anchorplan::cli {

struct RunOptions {
  std::filesystem::path out_dir;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool write_samples = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumeric = 4;

int exit_code_for(ErrorCode code);

// Each command writes its artifacts into options.out_dir and throws on failure.
void run_field(const ScenarioConfig& config, const RunOptions& options);
void run_optimize(const ScenarioConfig& config, const RunOptions& options);
void run_feasibility(const ScenarioConfig& config, const RunOptions& options);
void run_simulate(const ScenarioConfig& config, const RunOptions& options);
void run_fit(const ScenarioConfig& config, const std::filesystem::path& input_csv, const RunOptions& options);

}  // namespace anchorplan::cli
