#include "pfrlab/noise.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pfrlab/util.hpp"

namespace pfrlab {

using nlohmann::json;

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool rate_ok(double r) { return std::isfinite(r) && r >= 0.0 && r <= 1.0; }

// Rotation about the axis (cos tilt, 0, sin tilt) by `angle`, then a Z
// rotation by `z_angle`, as a transfer matrix.
Ptm coherent_ptm(double angle, double tilt, double z_angle) {
  const Eigen::Vector3d axis(std::cos(tilt), 0.0, std::sin(tilt));
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(z_angle, Eigen::Vector3d::UnitZ()).toRotationMatrix() *
      Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  Ptm r = Ptm::Identity();
  r.block<3, 3>(1, 1) = rot;
  return r;
}

Ptm depolarizing_ptm(double p) {
  Ptm r = Ptm::Identity();
  r(1, 1) = r(2, 2) = r(3, 3) = 1.0 - p;
  return r;
}

Ptm dephasing_ptm(double q) {
  Ptm r = Ptm::Identity();
  r(1, 1) = r(2, 2) = 1.0 - 2.0 * q;
  return r;
}

Ptm amp_damping_ptm(double gamma) {
  Ptm r = Ptm::Zero();
  const double s = std::sqrt(1.0 - gamma);
  r(0, 0) = 1.0;
  r(1, 1) = s;
  r(2, 2) = s;
  r(3, 0) = gamma;
  r(3, 3) = 1.0 - gamma;
  return r;
}

double clamp_prob(double p) {
  return std::min(1.0 - 1e-12, std::max(1e-12, p));
}

}  // namespace

void DriftConfig::validate() const {
  require(std::isfinite(amplitude), "drift amplitude must be finite");
  require(std::isfinite(period) && period >= 1.0, "drift period must be >= 1");
}

void NoiseConfig::validate() const {
  require(std::isfinite(overrotation_eps), "overrotation must be finite");
  require(std::isfinite(axis_tilt), "axis tilt must be finite");
  require(rate_ok(depolarizing_rate), "depolarizing rate must be in [0, 1]");
  require(rate_ok(amp_damping_gamma), "damping gamma must be in [0, 1]");
  require(rate_ok(dephasing_rate), "dephasing rate must be in [0, 1]");
  drift.validate();
}

NoiseConfig coherence_preset() {
  // T1 = 10 us, T2 = 13 us, 50 ns gate. 1/T_phi = 1/T2 - 1/(2 T1).
  constexpr double t1_us = 10.0, t2_us = 13.0, gate_us = 0.05;
  NoiseConfig n;
  n.amp_damping_gamma = 1.0 - std::exp(-gate_us / t1_us);
  const double inv_tphi = 1.0 / t2_us - 0.5 / t1_us;
  n.dephasing_rate = 0.5 * (1.0 - std::exp(-gate_us * inv_tphi));
  return n;
}

void SpamConfig::validate() const {
  const double s = 1.0 / std::sqrt(2.0);
  require(std::abs(rho[0] - s) <= 1e-9, "rho must have unit trace");
  require(rho.tail<3>().norm() <= s + 1e-9, "rho must be a valid state");
  // E = (e0 I + e.sigma)/sqrt(2) has eigenvalues (e0 +- |e|)/sqrt(2).
  const double e_vec = effect.tail<3>().norm();
  require(effect[0] - e_vec >= -1e-9 &&
              effect[0] + e_vec <= std::sqrt(2.0) + 1e-9,
          "effect must satisfy 0 <= E <= I");
  require(rate_ok(prep_error) && rate_ok(meas_error),
          "SPAM error probabilities must be in [0, 1]");
}

Bloch4 effective_rho(const SpamConfig& spam) {
  Bloch4 r = spam.rho;
  r[2] *= 1.0 - 2.0 * spam.prep_error;
  r[3] *= 1.0 - 2.0 * spam.prep_error;
  return r;
}

Bloch4 effective_effect(const SpamConfig& spam) {
  Bloch4 e = (1.0 - 2.0 * spam.meas_error) * spam.effect;
  e[0] += spam.meas_error * std::sqrt(2.0);
  return e;
}

Ptm error_channel(const NoiseConfig& noise, double drift_value) {
  const Ptm coh =
      coherent_ptm(noise.overrotation_eps, noise.axis_tilt, drift_value);
  return amp_damping_ptm(noise.amp_damping_gamma) *
         dephasing_ptm(noise.dephasing_rate) *
         depolarizing_ptm(noise.depolarizing_rate) * coh;
}

Ptm gate_channel(Clifford gate, const NoiseConfig& noise, double drift_value) {
  if (noise.attachment == NoiseConfig::Attachment::GateLevel)
    return error_channel(noise, drift_value) * ptm_of_clifford(gate);

  const Ptm pulse_err = error_channel(noise, drift_value);
  const Ptm x90 = ptm_of_clifford(gate_x90());
  Ptm r = Ptm::Identity();
  for (const PulseOp& op : diatomic_compile(gate).ops) {
    if (op.kind == PulseOp::Kind::X90) {
      // The overrotation lengthens the physical pulse; drift and the
      // stochastic errors ride along. Z updates stay perfect.
      r = pulse_err * (x90 * r);
    } else {
      Ptm z = Ptm::Identity();
      const double th = op.z_angle();
      z(1, 1) = std::cos(th);
      z(1, 2) = -std::sin(th);
      z(2, 1) = std::sin(th);
      z(2, 2) = std::cos(th);
      r = z * r;
    }
  }
  return r;
}

double sequence_probability(std::span<const Clifford> gates,
                            const NoiseConfig& noise, const SpamConfig& spam,
                            double drift_value, ClampStats* stats) {
  Bloch4 v = effective_rho(spam);
  if (noise.attachment == NoiseConfig::Attachment::GateLevel) {
    const Ptm err = error_channel(noise, drift_value);
    for (const Clifford g : gates) v = err * (ptm_of_clifford(g) * v);
  } else {
    for (const Clifford g : gates) v = gate_channel(g, noise, drift_value) * v;
  }
  const double raw = effective_effect(spam).dot(v);
  const double p = std::min(1.0, std::max(0.0, raw));
  if (stats && raw != p) {
    ++stats->clamped;
    stats->max_excess = std::max(stats->max_excess, std::abs(raw - p));
  }
  return p;
}

double drift_value(const DriftConfig& cfg, std::int64_t shot_index) {
  if (shot_index < 0) throw std::invalid_argument("shot index must be >= 0");
  if (cfg.amplitude == 0.0) return 0.0;
  if (cfg.kind == DriftKind::Sinusoid)
    return cfg.amplitude *
           std::sin(2.0 * M_PI * static_cast<double>(shot_index) / cfg.period);
  std::mt19937_64 eng(cfg.walk_seed);
  std::normal_distribution<double> step(0.0,
                                        cfg.amplitude / std::sqrt(cfg.period));
  double v = 0.0;
  for (std::int64_t k = 0; k < shot_index; ++k) v += step(eng);
  return v;
}

DriftClock::DriftClock(const DriftConfig& cfg, std::int64_t start_index)
    : cfg_(cfg),
      index_(start_index),
      engine_(cfg.walk_seed),
      step_(0.0, cfg.amplitude != 0.0 ? cfg.amplitude / std::sqrt(cfg.period)
                                      : 1.0) {
  if (cfg_.kind == DriftKind::RandomWalk && cfg_.amplitude != 0.0)
    for (std::int64_t k = 0; k < start_index; ++k) walk_value_ += step_(engine_);
}

double DriftClock::next() {
  double v;
  if (cfg_.kind == DriftKind::Sinusoid || cfg_.amplitude == 0.0) {
    v = drift_value(cfg_, index_);
  } else {
    v = walk_value_;
    walk_value_ += step_(engine_);
  }
  ++index_;
  return v;
}

namespace {

double bernoulli_count_probability(double p) { return clamp_prob(p); }

}  // namespace

Dataset sample_dataset(const GstDesign& design, long n_shots,
                       const NoiseConfig& noise, const SpamConfig& spam,
                       std::uint64_t seed, SampleMode mode) {
  if (n_shots < 1) throw std::invalid_argument("n_shots must be >= 1");
  noise.validate();
  spam.validate();

  Dataset ds;
  ds.seed = seed;
  ds.noise_digest = noise_digest(noise);
  ds.randomized = mode == SampleMode::Randomized;
  const std::size_t n_seq = design.sequences.size();

  if (mode == SampleMode::Plain && noise.drift.amplitude == 0.0) {
    // No drift: each sequence is a plain binomial.
    for (std::size_t s = 0; s < n_seq; ++s) {
      const CliffordCircuit c = design.circuit_of(design.sequences[s]);
      const double p =
          bernoulli_count_probability(sequence_probability(c.gates, noise, spam, 0.0));
      std::mt19937_64 eng(derive_seed(seed, 1, s));
      std::binomial_distribution<long> bin(n_shots, p);
      ds.rows.push_back({static_cast<int>(s), n_shots, bin(eng)});
    }
    return ds;
  }

  std::vector<long> counts(n_seq, 0);
  std::vector<CliffordCircuit> circuits;
  circuits.reserve(n_seq);
  for (const auto& sq : design.sequences) circuits.push_back(design.circuit_of(sq));

  DriftClock clock(noise.drift);
  SplitMix64 outcomes(derive_seed(seed, 2));
  for (long pass = 0; pass < n_shots; ++pass) {
    for (std::size_t s = 0; s < n_seq; ++s) {
      const double delta = clock.next();
      double p;
      if (mode == SampleMode::Randomized && !circuits[s].empty()) {
        const RandomizedCircuit rc =
            randomize(circuits[s], derive_seed(seed, 3, pass, s));
        p = sequence_probability(rc.gates, noise, spam, delta);
      } else {
        p = sequence_probability(circuits[s].gates, noise, spam, delta);
      }
      if (outcomes.next_double() < bernoulli_count_probability(p)) ++counts[s];
    }
  }
  for (std::size_t s = 0; s < n_seq; ++s)
    ds.rows.push_back({static_cast<int>(s), n_shots, counts[s]});
  return ds;
}

InterleavedDatasets sample_interleaved(const GstDesign& design, long n_shots,
                                       const NoiseConfig& noise,
                                       const SpamConfig& spam,
                                       std::uint64_t seed,
                                       int interleave_block,
                                       std::int64_t drift_start_index) {
  if (n_shots < 1) throw std::invalid_argument("n_shots must be >= 1");
  if (interleave_block < 1 || n_shots % interleave_block != 0)
    throw std::invalid_argument("n_shots must be divisible by interleave_block");
  noise.validate();
  spam.validate();

  const std::size_t n_seq = design.sequences.size();
  std::vector<CliffordCircuit> circuits;
  circuits.reserve(n_seq);
  for (const auto& sq : design.sequences) circuits.push_back(design.circuit_of(sq));

  std::vector<long> k_rand(n_seq, 0), k_plain(n_seq, 0);
  DriftClock clock(noise.drift, drift_start_index);
  SplitMix64 outcomes(derive_seed(seed, 2));

  const long n_blocks = n_shots / interleave_block;
  for (long block = 0; block < n_blocks; ++block) {
    for (int arm = 0; arm < 2; ++arm) {  // 0: randomized passes, 1: plain
      for (int pass = 0; pass < interleave_block; ++pass) {
        const long global_pass = block * interleave_block + pass;
        for (std::size_t s = 0; s < n_seq; ++s) {
          const double delta = clock.next();
          double p;
          if (arm == 0 && !circuits[s].empty()) {
            const RandomizedCircuit rc =
                randomize(circuits[s], derive_seed(seed, 3, global_pass, s));
            p = sequence_probability(rc.gates, noise, spam, delta);
          } else {
            p = sequence_probability(circuits[s].gates, noise, spam, delta);
          }
          const bool one = outcomes.next_double() < bernoulli_count_probability(p);
          if (one) ++(arm == 0 ? k_rand : k_plain)[s];
        }
      }
    }
  }

  InterleavedDatasets out;
  out.drift_end_index = clock.index();
  out.randomized.seed = seed;
  out.randomized.noise_digest = noise_digest(noise);
  out.randomized.randomized = true;
  out.plain.seed = seed;
  out.plain.noise_digest = out.randomized.noise_digest;
  out.plain.randomized = false;
  for (std::size_t s = 0; s < n_seq; ++s) {
    out.randomized.rows.push_back({static_cast<int>(s), n_shots, k_rand[s]});
    out.plain.rows.push_back({static_cast<int>(s), n_shots, k_plain[s]});
  }
  return out;
}

std::vector<double> design_probabilities(const GstDesign& design,
                                         const NoiseConfig& noise,
                                         const SpamConfig& spam,
                                         double drift) {
  std::vector<double> ps;
  ps.reserve(design.sequences.size());
  for (const auto& sq : design.sequences) {
    const CliffordCircuit c = design.circuit_of(sq);
    ps.push_back(sequence_probability(c.gates, noise, spam, drift));
  }
  return ps;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "sequence_id,n,k\n";
  for (const auto& row : ds.rows)
    out << row.sequence_id << ',' << row.n_shots << ',' << row.k_ones << '\n';

  json meta;
  meta["seed"] = ds.seed;
  meta["noise_digest"] = ds.noise_digest;
  meta["randomized"] = ds.randomized;
  std::ofstream mout(path.string() + ".meta.json");
  mout << meta.dump(1) << '\n';
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Dataset ds;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DatasetRow row;
    char c1, c2;
    std::istringstream ls(line);
    if (!(ls >> row.sequence_id >> c1 >> row.n_shots >> c2 >> row.k_ones) ||
        c1 != ',' || c2 != ',')
      throw std::runtime_error("bad dataset row: " + line);
    if (row.k_ones < 0 || row.k_ones > row.n_shots)
      throw std::runtime_error("dataset row violates 0 <= k <= n: " + line);
    ds.rows.push_back(row);
  }
  const auto meta_path = path.string() + ".meta.json";
  if (std::ifstream min{meta_path}) {
    const json meta = json::parse(min);
    ds.seed = meta.value("seed", 0ULL);
    ds.noise_digest = meta.value("noise_digest", "");
    ds.randomized = meta.value("randomized", false);
  }
  return ds;
}

std::string noise_to_json(const NoiseConfig& noise) {
  json j;
  j["overrotation_eps"] = noise.overrotation_eps;
  j["axis_tilt"] = noise.axis_tilt;
  j["depolarizing_rate"] = noise.depolarizing_rate;
  j["amp_damping_gamma"] = noise.amp_damping_gamma;
  j["dephasing_rate"] = noise.dephasing_rate;
  j["drift"] = {{"amplitude", noise.drift.amplitude},
                {"period", noise.drift.period},
                {"kind", noise.drift.kind == DriftKind::Sinusoid
                             ? "sinusoid"
                             : "random-walk"},
                {"target", "detuning-phase"},
                {"walk_seed", noise.drift.walk_seed}};
  j["attachment"] = noise.attachment == NoiseConfig::Attachment::GateLevel
                        ? "gate-level"
                        : "pulse-level";
  return j.dump(1);
}

NoiseConfig noise_from_json(const std::string& text) {
  const json j = json::parse(text);
  NoiseConfig n;
  n.overrotation_eps = j.value("overrotation_eps", 0.0);
  n.axis_tilt = j.value("axis_tilt", 0.0);
  n.depolarizing_rate = j.value("depolarizing_rate", 0.0);
  n.amp_damping_gamma = j.value("amp_damping_gamma", 0.0);
  n.dephasing_rate = j.value("dephasing_rate", 0.0);
  if (j.contains("drift")) {
    const json& d = j["drift"];
    n.drift.amplitude = d.value("amplitude", 0.0);
    n.drift.period = d.value("period", 1.0);
    const std::string kind = d.value("kind", "sinusoid");
    if (kind == "sinusoid")
      n.drift.kind = DriftKind::Sinusoid;
    else if (kind == "random-walk")
      n.drift.kind = DriftKind::RandomWalk;
    else
      throw std::invalid_argument("unknown drift kind: " + kind);
    const std::string target = d.value("target", "detuning-phase");
    if (target != "detuning-phase")
      throw std::invalid_argument("unknown drift target: " + target);
    n.drift.walk_seed = d.value("walk_seed", 0ULL);
  }
  const std::string att = j.value("attachment", "gate-level");
  if (att == "gate-level")
    n.attachment = NoiseConfig::Attachment::GateLevel;
  else if (att == "pulse-level")
    n.attachment = NoiseConfig::Attachment::PulseLevel;
  else
    throw std::invalid_argument("unknown attachment: " + att);
  n.validate();
  return n;
}

std::string spam_to_json(const SpamConfig& spam) {
  json j;
  j["rho"] = {spam.rho[0], spam.rho[1], spam.rho[2], spam.rho[3]};
  j["effect"] = {spam.effect[0], spam.effect[1], spam.effect[2],
                 spam.effect[3]};
  j["prep_error"] = spam.prep_error;
  j["meas_error"] = spam.meas_error;
  return j.dump(1);
}

SpamConfig spam_from_json(const std::string& text) {
  const json j = json::parse(text);
  SpamConfig s;
  if (j.contains("rho")) {
    const auto v = j["rho"].get<std::vector<double>>();
    if (v.size() != 4) throw std::invalid_argument("rho must have 4 entries");
    for (int k = 0; k < 4; ++k) s.rho[k] = v[k];
  }
  if (j.contains("effect")) {
    const auto v = j["effect"].get<std::vector<double>>();
    if (v.size() != 4) throw std::invalid_argument("effect must have 4 entries");
    for (int k = 0; k < 4; ++k) s.effect[k] = v[k];
  }
  s.prep_error = j.value("prep_error", 0.0);
  s.meas_error = j.value("meas_error", 0.0);
  s.validate();
  return s;
}

std::string noise_digest(const NoiseConfig& noise) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(noise_to_json(noise))));
  return buf;
}

}  // namespace pfrlab
