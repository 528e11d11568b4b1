#pragma once

// Command-line front end: sequence inspection, property and bound
// verification, Monte Carlo runs and parameter sweeps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcms/sim.hpp"

namespace qcms {

inline constexpr const char* kToolName = "qcms";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Parameters shared by `simulate` and `sweep`.
struct ExperimentConfig {
  int scene = 0;  // 0 for a single `simulate` run
  int n_channels = 200;
  double theta_a = 0.3;
  double theta_b = 0.4;
  std::size_t overlap = 1;
  std::uint64_t trials = 30000;
  std::uint64_t drift_max = 50;
  std::uint64_t seed = 1;
  WildcardMode wildcard = WildcardMode::RandomFill;
  PermutationPolicy::Mode perm = PermutationPolicy::Mode::Shuffled;
  unsigned threads = 0;
};

struct SweepRow {
  std::string scene;
  double param = 0;
  std::uint64_t trials = 0;
  double ettr = 0;
  std::uint64_t mttr_observed = 0;
  double ci95 = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget_exceeded = 0;
};

inline constexpr const char* kSweepCsvHeader = "scene,param,trials,ettr,mttr_observed,ci95,seed";

/// Swept values for a scene: G for scene 1, N for scene 2, theta_B for scene 3.
std::vector<double> scene_values(int scene);

/// Runs every point of the scene; `base` carries the fixed parameters.
/// Each point uses the master seed, so points are directly comparable.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base);

/// Applies the scene's fixed parameters to `config` (theta, N, G as the scene defines).
ExperimentConfig scene_defaults(int scene);

std::string sweep_csv(const std::vector<SweepRow>& rows, const ExperimentConfig& config);
std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

const char* wildcard_name(WildcardMode mode);
const char* perm_name(PermutationPolicy::Mode mode);

/// Entry point behind the `qcms` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcms
