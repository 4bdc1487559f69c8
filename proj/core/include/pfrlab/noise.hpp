#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pfrlab/design.hpp"
#include "pfrlab/pfr.hpp"
#include "pfrlab/ptm.hpp"

namespace pfrlab {

enum class DriftKind { Sinusoid, RandomWalk };

// Slowly varying detuning phase: an extra Z rotation by the drift value,
// frozen within a shot and advancing once per shot across the whole
// interleaved schedule.
struct DriftConfig {
  double amplitude = 0.0;  // radians
  double period = 1.0;     // shots per cycle (sinusoid) / step scale
  DriftKind kind = DriftKind::Sinusoid;
  std::uint64_t walk_seed = 0;

  void validate() const;
};

// Per-gate error model. Coherent part: rotation by overrotation_eps about
// the X axis tilted by axis_tilt toward Z, composed with the drift's Z
// rotation. Stochastic part: depolarizing, amplitude damping, dephasing.
// gate-level: one fixed error map follows every ideal gate.
// pulse-level: the error follows each physical X_pi/2 pulse of the
// diatomic form; Z-frame updates are perfect.
struct NoiseConfig {
  double overrotation_eps = 0.0;  // radians
  double axis_tilt = 0.0;         // radians, X axis tilted toward Z
  double depolarizing_rate = 0.0;
  double amp_damping_gamma = 0.0;
  double dephasing_rate = 0.0;  // phase-flip probability
  DriftConfig drift;
  enum class Attachment { GateLevel, PulseLevel };
  Attachment attachment = Attachment::GateLevel;

  void validate() const;  // rates in [0,1], angles finite, period >= 1
};

// Damping/dephasing preset for T1 = 10 us, T2 = 13 us and a 50 ns gate.
NoiseConfig coherence_preset();

struct SpamConfig {
  Bloch4 rho = state_zero();
  Bloch4 effect = effect_one();
  double prep_error = 0.0;  // probability of preparing |1> instead of |0>
  double meas_error = 0.0;  // symmetric assignment error

  void validate() const;  // rho a valid state, effect a valid POVM element
};

// SPAM vectors with the classical error probabilities folded in.
Bloch4 effective_rho(const SpamConfig& spam);
Bloch4 effective_effect(const SpamConfig& spam);

// Fixed error map (stochastic after coherent) for one drift value.
Ptm error_channel(const NoiseConfig& noise, double drift_value);

// Noisy channel of one gate: (stochastic) . (coherent + drift) . (ideal),
// or the per-pulse diatomic composition in pulse-level attachment.
// CPTP by construction.
Ptm gate_channel(Clifford gate, const NoiseConfig& noise, double drift_value);

struct ClampStats {
  long clamped = 0;
  double max_excess = 0.0;  // largest distance outside [0, 1] seen
};

// <effect| R_L ... R_1 |rho>, clamped to [0, 1]. Excess beyond 1e-12 is
// recorded in stats when provided.
double sequence_probability(std::span<const Clifford> gates,
                            const NoiseConfig& noise, const SpamConfig& spam,
                            double drift_value, ClampStats* stats = nullptr);

// Drift value before shot `shot_index` (index 0 is the first shot).
// Random-walk values are cumulative seeded Gaussian increments and are
// recomputed from the seed (O(shot_index)); use DriftClock for streams.
double drift_value(const DriftConfig& cfg, std::int64_t shot_index);

// Incremental per-shot drift stream; agrees with drift_value() at every
// index but advances in O(1) per shot.
class DriftClock {
 public:
  explicit DriftClock(const DriftConfig& cfg, std::int64_t start_index = 0);
  double next();  // value for the current shot, then advance
  std::int64_t index() const { return index_; }

 private:
  DriftConfig cfg_;
  std::int64_t index_ = 0;
  double walk_value_ = 0.0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> step_;
};

struct DatasetRow {
  int sequence_id = 0;
  long n_shots = 0;
  long k_ones = 0;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  std::uint64_t seed = 0;
  std::string noise_digest;
  bool randomized = false;
};

enum class SampleMode { Plain, Randomized };

// Single-arm sampling with its own drift clock. Plain mode without drift
// reduces to one binomial draw per sequence; otherwise shots are simulated
// one at a time. Randomized mode draws a fresh randomization per shot.
Dataset sample_dataset(const GstDesign& design, long n_shots,
                       const NoiseConfig& noise, const SpamConfig& spam,
                       std::uint64_t seed, SampleMode mode);

struct InterleavedDatasets {
  Dataset randomized;
  Dataset plain;
  std::int64_t drift_end_index = 0;
};

// Interleaved schedule: blocks of `interleave_block` randomized passes
// (one shot of every sequence, sequence-major) followed by the same number
// of plain passes, sharing one drift clock, until n_shots per sequence and
// arm are collected. n_shots must be divisible by interleave_block.
InterleavedDatasets sample_interleaved(const GstDesign& design, long n_shots,
                                       const NoiseConfig& noise,
                                       const SpamConfig& spam,
                                       std::uint64_t seed,
                                       int interleave_block,
                                       std::int64_t drift_start_index = 0);

// Exact per-sequence outcome probabilities for a fixed drift value
// (used to sample from fitted models and in tests).
std::vector<double> design_probabilities(const GstDesign& design,
                                         const NoiseConfig& noise,
                                         const SpamConfig& spam,
                                         double drift_value = 0.0);

// CSV with header "sequence_id,n,k" plus a JSON metadata sidecar
// (<path>.meta.json) carrying seed, noise digest and the randomized flag.
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

std::string noise_digest(const NoiseConfig& noise);

std::string noise_to_json(const NoiseConfig& noise);
NoiseConfig noise_from_json(const std::string& text);
std::string spam_to_json(const SpamConfig& spam);
SpamConfig spam_from_json(const std::string& text);

}  // namespace pfrlab
