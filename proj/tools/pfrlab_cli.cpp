#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pfrlab/harness.hpp"
#include "pfrlab/util.hpp"

namespace fs = std::filesystem;
using namespace pfrlab;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

ExperimentConfig load_config(const std::string& profile,
                             const std::string& config_file,
                             std::uint64_t seed, bool seed_set,
                             const std::string& out_dir) {
  ExperimentConfig base;
  if (profile == "quick")
    base = quick_profile();
  else if (profile == "paper")
    base = paper_profile();
  else
    throw std::runtime_error("unknown profile: " + profile);
  ExperimentConfig cfg =
      config_file.empty() ? base : config_from_json(slurp(config_file), base);
  if (seed_set) cfg.master_seed = seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return cfg;
}

int cmd_design(int l_max, const std::string& out,
               const std::string& circuits) {
  const GstDesign design = standard_design(l_max);
  save_design(design, out);
  std::cout << "design: " << design.sequences.size() << " sequences, max "
            << design.max_flat_length() << " gates -> " << out << "\n";
  if (!circuits.empty()) {
    std::ofstream cout_file(circuits);
    cout_file << design_to_circuit_text(design);
    std::cout << "circuits -> " << circuits << "\n";
  }
  return 0;
}

int cmd_randomize(const std::string& circuits_file, std::uint64_t seed,
                  int count, const std::string& out) {
  std::ifstream in(circuits_file);
  if (!in) throw std::runtime_error("cannot read " + circuits_file);
  std::ofstream out_file(out);
  if (!out_file) throw std::runtime_error("cannot write " + out);
  std::string line;
  long line_no = 0, emitted = 0;
  while (std::getline(in, line)) {
    const CliffordCircuit circuit = circuit_from_text(line);
    if (circuit.empty()) {
      ++line_no;
      continue;
    }
    for (int k = 0; k < count; ++k) {
      const RandomizedCircuit rc =
          randomize(circuit, derive_seed(seed, line_no, k));
      if (!verify_equivalence(circuit, rc))
        throw std::runtime_error("randomization equivalence check failed");
      out_file << randomized_to_line(rc) << '\n';
      ++emitted;
    }
    ++line_no;
  }
  std::cout << "randomized " << emitted << " circuits -> " << out << "\n";
  return 0;
}

int cmd_simulate(const std::string& design_file, const std::string& profile,
                 const std::string& config_file, long shots,
                 std::uint64_t seed, bool seed_set, const std::string& mode,
                 const std::string& out_dir) {
  const GstDesign design = load_design(design_file);
  ExperimentConfig cfg = load_config(profile, config_file, seed, seed_set, "");
  if (shots > 0) {
    cfg.shots_per_sequence = shots;
    cfg.n_randomizations = shots;
  }
  fs::create_directories(out_dir);
  if (mode == "interleaved") {
    const InterleavedDatasets ds = sample_interleaved(
        design, cfg.shots_per_sequence, cfg.noise, cfg.spam, cfg.master_seed,
        cfg.interleave_block);
    write_dataset_csv(ds.randomized, fs::path(out_dir) / "randomized.csv");
    write_dataset_csv(ds.plain, fs::path(out_dir) / "plain.csv");
    std::cout << "datasets -> " << out_dir << "/{randomized,plain}.csv\n";
  } else {
    const SampleMode m =
        mode == "randomized" ? SampleMode::Randomized : SampleMode::Plain;
    if (mode != "randomized" && mode != "plain")
      throw std::runtime_error("unknown mode: " + mode);
    const Dataset ds = sample_dataset(design, cfg.shots_per_sequence,
                                      cfg.noise, cfg.spam, cfg.master_seed, m);
    write_dataset_csv(ds, fs::path(out_dir) / (mode + ".csv"));
    std::cout << "dataset -> " << out_dir << "/" << mode << ".csv\n";
  }
  return 0;
}

int cmd_fit(const std::string& design_file, const std::string& dataset_file,
            const std::string& out_dir) {
  const GstDesign design = load_design(design_file);
  const Dataset dataset = read_dataset_csv(dataset_file);
  const ArmResult arm = analyze_arm(dataset, design, "fit", MleOptions{});
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  std::ofstream(out / "fit_report.json") << fit_report_to_json(arm.report)
                                         << '\n';
  save_model(arm.h1, out / "model_h1.json");
  save_model(arm.h2, out / "model_h2.json");
  save_model(arm.h1_aligned, out / "model_h1_aligned.json");
  std::ofstream(out / "metrics.json") << metrics_to_json(arm.metrics) << '\n';
  std::cout << "N_sigma(H1) = " << arm.report.n_sigma_h1
            << "  N_sigma(H2) = " << arm.report.n_sigma_h2 << "\n"
            << "reports -> " << out_dir << "\n";
  return 0;
}

int cmd_metrics(const std::string& model_file, const std::string& design_file,
                const std::string& out_file) {
  const GstDesign design = load_design(design_file);
  const GateSetModel model = load_model(model_file);
  const GateSetModel targets = ideal_target_model(design);
  const GateSetModel aligned = gauge_optimize(model, targets);
  const MetricsReport report = compute_metrics(aligned, targets);
  std::ofstream out(out_file);
  if (!out) throw std::runtime_error("cannot write " + out_file);
  out << metrics_to_json(report) << '\n';
  for (const auto& g : report.gates)
    std::cout << g.label << ": infidelity " << g.infidelity << ", diamond "
              << g.diamond << "\n";
  std::cout << "report -> " << out_file << "\n";
  return 0;
}

int cmd_run(const std::string& profile, const std::string& config_file,
            std::uint64_t seed, bool seed_set, const std::string& out_dir) {
  const ExperimentConfig cfg =
      load_config(profile, config_file, seed, seed_set, out_dir);
  const RunArtifacts artifacts = run_experiment(cfg);
  for (std::size_t r = 0; r < artifacts.repetitions.size(); ++r) {
    const auto& rep = artifacts.repetitions[r];
    std::cout << "repetition " << r << ": plain N_sigma(H1) = "
              << rep.plain.report.n_sigma_h1
              << ", N_sigma(H2) = " << rep.plain.report.n_sigma_h2
              << " | randomized N_sigma(H1) = "
              << rep.randomized.report.n_sigma_h1
              << ", N_sigma(H2) = " << rep.randomized.report.n_sigma_h2
              << "\n";
  }
  std::cout << "artifacts -> " << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli-frame randomization laboratory"};
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand("design", "Generate a GST design");
  int l_max = 64;
  std::string design_out = "design.json", circuits_out;
  design->add_option("--lmax", l_max, "Largest germ power (power of two)");
  design->add_option("--out", design_out, "Design JSON path");
  design->add_option("--circuits", circuits_out,
                     "Also write the flat circuits as text");

  // randomize
  auto* rnd = app.add_subcommand("randomize", "Frame-randomize circuits");
  std::string rnd_in, rnd_out = "randomized.txt";
  std::uint64_t rnd_seed = 1;
  int rnd_count = 1;
  rnd->add_option("--circuits", rnd_in, "Circuit text file, one per line")
      ->required();
  rnd->add_option("--seed", rnd_seed, "Randomization seed");
  rnd->add_option("--count", rnd_count, "Randomizations per circuit");
  rnd->add_option("--out", rnd_out, "Output file (line format)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample synthetic datasets");
  std::string sim_design, sim_profile = "quick", sim_config,
              sim_mode = "interleaved", sim_out = "datasets";
  long sim_shots = 0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--design", sim_design, "Design JSON")->required();
  sim->add_option("--profile", sim_profile, "quick or paper");
  sim->add_option("--config", sim_config, "Experiment config JSON");
  sim->add_option("--shots", sim_shots, "Shots per sequence (override)");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--mode", sim_mode, "plain, randomized or interleaved");
  sim->add_option("--out", sim_out, "Output directory");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit H0/H1/H2 to a dataset");
  std::string fit_design, fit_dataset, fit_out = "fit";
  fit->add_option("--design", fit_design, "Design JSON")->required();
  fit->add_option("--dataset", fit_dataset, "Dataset CSV")->required();
  fit->add_option("--out", fit_out, "Output directory");

  // metrics
  auto* met = app.add_subcommand("metrics", "Channel metrics of a model");
  std::string met_model, met_design, met_out = "metrics.json";
  met->add_option("--model", met_model, "GateSetModel JSON")->required();
  met->add_option("--design", met_design, "Design JSON")->required();
  met->add_option("--out", met_out, "Output JSON path");

  // run
  auto* run = app.add_subcommand("run", "Run the full experiment pipeline");
  std::string run_profile = "quick", run_config, run_out;
  std::uint64_t run_seed = 0;
  run->add_option("--profile", run_profile, "quick or paper");
  run->add_option("--config", run_config, "Experiment config JSON");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Master seed");
  run->add_option("--out", run_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design(l_max, design_out, circuits_out);
    if (rnd->parsed()) return cmd_randomize(rnd_in, rnd_seed, rnd_count, rnd_out);
    if (sim->parsed())
      return cmd_simulate(sim_design, sim_profile, sim_config, sim_shots,
                          sim_seed, sim_seed_opt->count() > 0, sim_mode,
                          sim_out);
    if (fit->parsed()) return cmd_fit(fit_design, fit_dataset, fit_out);
    if (met->parsed()) return cmd_metrics(met_model, met_design, met_out);
    if (run->parsed())
      return cmd_run(run_profile, run_config, run_seed,
                     run_seed_opt->count() > 0, run_out);
  } catch (const StageError& e) {
    std::cerr << "error at stage " << e.stage << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
