#include "pfrlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pfrlab/svg.hpp"
#include "pfrlab/util.hpp"

namespace pfrlab {

using nlohmann::json;
namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (l_max < 1 || (l_max & (l_max - 1)) != 0)
    throw std::invalid_argument("l_max must be a power of two");
  if (shots_per_sequence < 1)
    throw std::invalid_argument("shots_per_sequence must be >= 1");
  if (interleave_block < 1 || shots_per_sequence % interleave_block != 0)
    throw std::invalid_argument(
        "shots_per_sequence must be divisible by interleave_block");
  if (n_randomizations != shots_per_sequence)
    throw std::invalid_argument(
        "one randomization per shot: n_randomizations must equal "
        "shots_per_sequence");
  if (repetitions < 1)
    throw std::invalid_argument("repetitions must be >= 1");
  if (bootstrap_resamples < 100)
    throw std::invalid_argument("bootstrap_resamples must be >= 100");
  noise.validate();
  spam.validate();
}

namespace {

ExperimentConfig base_profile(int l_max, long shots, int repetitions) {
  ExperimentConfig c;
  c.l_max = l_max;
  c.shots_per_sequence = shots;
  c.n_randomizations = shots;
  c.repetitions = repetitions;
  c.noise = coherence_preset();
  c.noise.overrotation_eps = 0.02;
  c.noise.drift.amplitude = 0.05;
  c.noise.drift.kind = DriftKind::Sinusoid;
  c.spam.prep_error = 0.01;
  c.spam.meas_error = 0.02;
  // Several drift cycles per run: period = total scheduled shots / 6.
  const std::size_t n_seq = standard_design(l_max).sequences.size();
  c.noise.drift.period = std::max<double>(
      1000.0, 2.0 * static_cast<double>(shots) * n_seq / 6.0);
  return c;
}

}  // namespace

ExperimentConfig quick_profile() { return base_profile(64, 250, 2); }

ExperimentConfig paper_profile() {
  ExperimentConfig c = base_profile(1024, 1000, 7);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["l_max"] = c.l_max;
  j["shots_per_sequence"] = c.shots_per_sequence;
  j["n_randomizations"] = c.n_randomizations;
  j["interleave_block"] = c.interleave_block;
  j["repetitions"] = c.repetitions;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["bootstrap_resamples"] = c.bootstrap_resamples;
  j["noise"] = json::parse(noise_to_json(c.noise));
  j["spam"] = json::parse(spam_to_json(c.spam));
  return j.dump(1);
}

ExperimentConfig config_from_json(const std::string& text,
                                  const ExperimentConfig& base) {
  const json j = json::parse(text);
  ExperimentConfig c = base;
  c.l_max = j.value("l_max", c.l_max);
  c.shots_per_sequence = j.value("shots_per_sequence", c.shots_per_sequence);
  c.n_randomizations = j.value("n_randomizations", c.n_randomizations);
  c.interleave_block = j.value("interleave_block", c.interleave_block);
  c.repetitions = j.value("repetitions", c.repetitions);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
  if (j.contains("noise")) c.noise = noise_from_json(j["noise"].dump());
  if (j.contains("spam")) c.spam = spam_from_json(j["spam"].dump());
  return c;
}

ArmResult analyze_arm(const Dataset& dataset, const GstDesign& design,
                      const std::string& arm_name, const MleOptions& opts) {
  ArmResult arm;
  arm.arm = arm_name;
  AnalysisResult res = analyze_dataset(dataset, design, opts);
  arm.report = res.report;
  arm.h1 = std::move(res.h1);
  arm.h2 = std::move(res.h2);
  const GateSetModel targets = ideal_target_model(design);
  arm.h1_aligned = gauge_optimize(arm.h1, targets);
  arm.metrics = compute_metrics(arm.h1_aligned, targets);
  return arm;
}

namespace {

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int gi_slot(const GstDesign& design) {
  for (std::size_t k = 0; k < design.gate_labels.size(); ++k)
    if (design.gate_labels[k] == "Gi") return static_cast<int>(k);
  return 0;
}

// Warm-started refit used by the parametric bootstrap.
NamedValues bootstrap_estimator(const Dataset& resampled,
                                const GstDesign& design,
                                const GateSetModel& warm_start,
                                const GateSetModel& targets,
                                const MleOptions& base_opts, int idle_slot) {
  MleOptions opts = base_opts;
  opts.progressive = false;
  opts.max_iters_final = 600;
  const MleFit fit = fit_h1_mle(resampled, design, warm_start, opts);
  const GateSetModel aligned = gauge_optimize(fit.model, targets);

  NamedValues values;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      values["gi_" + std::to_string(i) + std::to_string(j)] =
          aligned.gates[idle_slot](i, j);
  DiamondOptions dopts;
  dopts.starts = 8;
  for (std::size_t g = 0; g < aligned.gates.size(); ++g) {
    values["inf_" + aligned.labels[g]] =
        avg_gate_infidelity(aligned.gates[g], targets.gates[g]);
    values["dia_" + aligned.labels[g]] =
        diamond_distance(aligned.gates[g], targets.gates[g], dopts);
  }
  return values;
}

void attach_bootstrap(ArmResult& arm, const Dataset& dataset,
                      const GstDesign& design, const ExperimentConfig& config,
                      std::uint64_t seed) {
  const GateSetModel targets = ideal_target_model(design);
  const std::vector<double> probs =
      model_probabilities(dataset, design, arm.h1);
  const int idle = gi_slot(design);
  const Estimator est = [&](const Dataset& d) {
    return bootstrap_estimator(d, design, arm.h1, targets, config.mle, idle);
  };
  BootstrapOptions bopts;
  bopts.n_resamples = config.bootstrap_resamples;
  bopts.seed = seed;
  const auto ci = bootstrap_ci(est, dataset, probs, bopts);
  for (const auto& [name, interval] : ci) {
    if (name.rfind("gi_", 0) == 0) arm.gi_entry_ci[name] = interval;
  }
  for (auto& gm : arm.metrics.gates) {
    if (ci.contains("inf_" + gm.label)) gm.infidelity_ci = ci.at("inf_" + gm.label);
    if (ci.contains("dia_" + gm.label)) gm.diamond_ci = ci.at("dia_" + gm.label);
  }
}

std::string csv_double(double v) { return format_double(v); }

void write_n_sigma_csv(const RunArtifacts& a, const fs::path& path) {
  std::ofstream out(path);
  out << "repetition,arm,hypothesis,n_sigma\n";
  for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
    for (const ArmResult* arm :
         {&a.repetitions[r].randomized, &a.repetitions[r].plain}) {
      out << r << ',' << arm->arm << ",H1," << csv_double(arm->report.n_sigma_h1)
          << '\n';
      out << r << ',' << arm->arm << ",H2," << csv_double(arm->report.n_sigma_h2)
          << '\n';
    }
  }
}

void write_metrics_csv(const RunArtifacts& a, const fs::path& path) {
  std::ofstream out(path);
  out << "repetition,arm,gate,infidelity,diamond,infidelity_ci_lo,"
         "infidelity_ci_hi,diamond_ci_lo,diamond_ci_hi\n";
  for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
    for (const ArmResult* arm :
         {&a.repetitions[r].randomized, &a.repetitions[r].plain}) {
      for (const auto& g : arm->metrics.gates) {
        out << r << ',' << arm->arm << ',' << g.label << ','
            << csv_double(g.infidelity) << ',' << csv_double(g.diamond) << ',';
        if (!std::isnan(g.infidelity_ci[0]))
          out << csv_double(g.infidelity_ci[0]) << ','
              << csv_double(g.infidelity_ci[1]) << ','
              << csv_double(g.diamond_ci[0]) << ','
              << csv_double(g.diamond_ci[1]);
        else
          out << ",,,";
        out << '\n';
      }
    }
  }
}

void write_figures(const RunArtifacts& a, const fs::path& out_dir) {
  const int n_reps = static_cast<int>(a.repetitions.size());
  std::vector<double> xs(n_reps);
  for (int r = 0; r < n_reps; ++r) xs[r] = r + 1;
  auto series_of = [&](bool randomized, bool h2) {
    svg::Series s;
    s.x = xs;
    for (const auto& rep : a.repetitions) {
      const ArmResult& arm = randomized ? rep.randomized : rep.plain;
      s.y.push_back(h2 ? arm.report.n_sigma_h2 : arm.report.n_sigma_h1);
    }
    s.label = std::string(randomized ? "randomized " : "plain ") +
              (h2 ? "H2" : "H1");
    s.color = h2 ? "#d62728" : "#1f77b4";
    s.dashed = randomized;
    return s;
  };
  svg::write_file(out_dir / "n_sigma.svg",
                  svg::line_chart("Badness of fit", "repetition", "N_sigma",
                                  {series_of(false, false), series_of(false, true),
                                   series_of(true, false), series_of(true, true)},
                                  true));

  const int idle = gi_slot(a.design);
  svg::write_file(
      out_dir / "gi_heatmap_plain.svg",
      svg::heatmap4("Idle gate estimate, plain arm",
                    a.repetitions[0].plain.h1_aligned.gates[idle]));
  svg::write_file(
      out_dir / "gi_heatmap_randomized.svg",
      svg::heatmap4("Idle gate estimate, randomized arm",
                    a.repetitions[0].randomized.h1_aligned.gates[idle]));

  std::vector<std::string> cats;
  svg::Series inf_plain{"infidelity plain", {}, {}, "#1f77b4", false};
  svg::Series inf_rand{"infidelity randomized", {}, {}, "#aec7e8", false};
  svg::Series dia_plain{"diamond plain", {}, {}, "#d62728", false};
  svg::Series dia_rand{"diamond randomized", {}, {}, "#ff9896", false};
  for (std::size_t g = 0; g < a.repetitions[0].plain.metrics.gates.size(); ++g) {
    cats.push_back(a.repetitions[0].plain.metrics.gates[g].label);
    inf_plain.y.push_back(a.repetitions[0].plain.metrics.gates[g].infidelity);
    inf_rand.y.push_back(
        a.repetitions[0].randomized.metrics.gates[g].infidelity);
    dia_plain.y.push_back(a.repetitions[0].plain.metrics.gates[g].diamond);
    dia_rand.y.push_back(a.repetitions[0].randomized.metrics.gates[g].diamond);
  }
  svg::write_file(out_dir / "metrics.svg",
                  svg::bar_chart("Error metrics (repetition 1)", cats,
                                 {inf_plain, inf_rand, dia_plain, dia_rand},
                                 true));
}

}  // namespace

void emit_reports(const RunArtifacts& a, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_n_sigma_csv(a, out_dir / "n_sigma.csv");
  write_metrics_csv(a, out_dir / "metrics.csv");
  for (std::size_t r = 0; r < a.repetitions.size(); ++r) {
    for (const ArmResult* arm :
         {&a.repetitions[r].randomized, &a.repetitions[r].plain}) {
      const std::string prefix =
          "rep" + std::to_string(r) + "_" + arm->arm + "_";
      svg::write_file(out_dir / (prefix + "fit_report.json"),
                      fit_report_to_json(arm->report) + "\n");
      save_model(arm->h1, out_dir / (prefix + "model_h1.json"));
      save_model(arm->h2, out_dir / (prefix + "model_h2.json"));
      save_model(arm->h1_aligned, out_dir / (prefix + "model_h1_aligned.json"));
      svg::write_file(out_dir / (prefix + "metrics.json"),
                      metrics_to_json(arm->metrics) + "\n");
      if (!arm->gi_entry_ci.empty()) {
        json ci;
        for (const auto& [name, interval] : arm->gi_entry_ci)
          ci[name] = {interval[0], interval[1]};
        svg::write_file(out_dir / (prefix + "gi_entry_ci.json"),
                        ci.dump(1) + "\n");
      }
    }
  }
  write_figures(a, out_dir);
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  RunArtifacts artifacts;
  artifacts.config = config;

  json manifest;
  manifest["config"] = json::parse(config_to_json(config));
  manifest["schedule"] = "sequence-major";
  manifest["stages"] = json::array();

  const auto write_manifest = [&] {
    std::ofstream out(out_dir / "manifest.json");
    out << manifest.dump(1) << '\n';
    artifacts.manifest_json = manifest.dump(1);
  };

  const auto stage = [&](const std::string& name, const auto& fn) {
    try {
      fn();
      manifest["stages"].push_back(
          {{"name", name}, {"status", "ok"}, {"time", timestamp_now()}});
      write_manifest();
    } catch (const std::exception& e) {
      manifest["stages"].push_back({{"name", name},
                                    {"status", "failed"},
                                    {"error", e.what()},
                                    {"time", timestamp_now()}});
      write_manifest();
      throw StageError(name, e.what());
    }
  };

  stage("design", [&] {
    artifacts.design = standard_design(config.l_max);
    save_design(artifacts.design, out_dir / "design.json");
    manifest["sequence_count"] = artifacts.design.sequences.size();
  });

  const std::size_t n_seq = artifacts.design.sequences.size();
  const std::int64_t shots_per_rep =
      2 * config.shots_per_sequence * static_cast<std::int64_t>(n_seq);

  std::vector<InterleavedDatasets> datasets(config.repetitions);
  for (int r = 0; r < config.repetitions; ++r) {
    stage("sample_rep" + std::to_string(r), [&] {
      const std::uint64_t seed = derive_seed(config.master_seed, 1000, r);
      datasets[r] = sample_interleaved(
          artifacts.design, config.shots_per_sequence, config.noise,
          config.spam, seed, config.interleave_block,
          static_cast<std::int64_t>(r) * shots_per_rep);
      // Every scheduled shot lands in exactly one dataset row.
      long total = 0;
      for (const auto& row : datasets[r].randomized.rows) total += row.n_shots;
      for (const auto& row : datasets[r].plain.rows) total += row.n_shots;
      if (total != shots_per_rep)
        throw std::runtime_error("shot conservation violated");
      if (datasets[r].drift_end_index !=
          static_cast<std::int64_t>(r + 1) * shots_per_rep)
        throw std::runtime_error("drift clock out of step");
      const std::string tag = "rep" + std::to_string(r) + "_";
      write_dataset_csv(datasets[r].randomized,
                        out_dir / (tag + "randomized.csv"));
      write_dataset_csv(datasets[r].plain, out_dir / (tag + "plain.csv"));
      manifest["seeds"][std::to_string(r)] = seed;
      manifest["drift_index_end"][std::to_string(r)] =
          datasets[r].drift_end_index;
    });
  }

  artifacts.repetitions.resize(config.repetitions);
  for (int r = 0; r < config.repetitions; ++r) {
    stage("fit_rep" + std::to_string(r) + "_randomized", [&] {
      artifacts.repetitions[r].randomized = analyze_arm(
          datasets[r].randomized, artifacts.design, "randomized", config.mle);
    });
    stage("fit_rep" + std::to_string(r) + "_plain", [&] {
      artifacts.repetitions[r].plain = analyze_arm(
          datasets[r].plain, artifacts.design, "plain", config.mle);
    });
  }

  stage("bootstrap", [&] {
    attach_bootstrap(artifacts.repetitions[0].randomized,
                     datasets[0].randomized, artifacts.design, config,
                     derive_seed(config.master_seed, 2000, 0));
    attach_bootstrap(artifacts.repetitions[0].plain, datasets[0].plain,
                     artifacts.design, config,
                     derive_seed(config.master_seed, 2000, 1));
  });

  stage("reports", [&] { emit_reports(artifacts, out_dir); });
  return artifacts;
}

}  // namespace pfrlab
