#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pfrlab/estimation.hpp"
#include "pfrlab/metrics.hpp"

namespace pfrlab {

struct ExperimentConfig {
  int l_max = 64;
  long shots_per_sequence = 250;
  long n_randomizations = 250;  // one fresh randomization per shot
  int interleave_block = 10;    // passes per arm before switching
  int repetitions = 2;
  NoiseConfig noise;
  SpamConfig spam;
  std::uint64_t master_seed = 7ull;
  std::string output_dir = "pfrlab_out";
  int bootstrap_resamples = 100;  // parametric bootstrap on repetition 0
  MleOptions mle;

  void validate() const;
};

// Desk-scale defaults: L_max 64, 250 shots, 2 repetitions, coherent
// over-rotation 0.02 rad, sinusoidal detuning drift 0.05 rad, plus the
// T1/T2 damping preset.
ExperimentConfig quick_profile();
// Full-scale protocol: L_max 1024, 1000 shots, 1000 randomizations,
// 7 repetitions (hours of runtime; not part of the test suite).
ExperimentConfig paper_profile();

std::string config_to_json(const ExperimentConfig& c);
// Missing keys fall back to `base` (use a profile as the base).
ExperimentConfig config_from_json(const std::string& text,
                                  const ExperimentConfig& base = {});

struct ArmResult {
  std::string arm;  // "randomized" or "plain"
  FitReport report;
  GateSetModel h1;          // CPTP-projected MLE
  GateSetModel h2;          // monomial projection
  GateSetModel h1_aligned;  // gauge-optimized against the targets
  MetricsReport metrics;
  // 95% bootstrap intervals for the idle-gate transfer-matrix entries,
  // keyed "gi_<row><col>"; filled when the bootstrap ran for this arm.
  std::map<std::string, std::array<double, 2>> gi_entry_ci;
};

struct RepetitionResult {
  ArmResult randomized;
  ArmResult plain;
};

struct RunArtifacts {
  ExperimentConfig config;
  GstDesign design;
  std::vector<RepetitionResult> repetitions;
  std::string manifest_json;
};

// Thrown when a pipeline stage fails; the partial manifest on disk lists
// the completed stages.
struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string stage_name, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage_name)) {}
};

// The full experiment: design generation, interleaved randomized/plain
// data collection on a shared drift clock, per-arm H0/H1/H2 fits,
// metrics, bootstrap intervals (repetition 0), and report emission under
// config.output_dir.
RunArtifacts run_experiment(const ExperimentConfig& config);

// (Re-)write the CSV/JSON/SVG reports for existing artifacts.
void emit_reports(const RunArtifacts& artifacts,
                  const std::filesystem::path& out_dir);

// One nested-hypothesis analysis of a single dataset, including metrics;
// shared by run_experiment and the fit/metrics CLI commands.
ArmResult analyze_arm(const Dataset& dataset, const GstDesign& design,
                      const std::string& arm_name, const MleOptions& opts);

}  // namespace pfrlab
