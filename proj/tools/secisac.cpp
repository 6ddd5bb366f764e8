#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "secisac/config_io.hpp"
#include "secisac/conic/dump.hpp"
#include "secisac/harness.hpp"
#include "secisac/selftest.hpp"

using namespace secisac;

namespace {

std::vector<Baseline> parse_baselines(const std::string& arg) {
  if (arg == "all") return all_baselines();
  std::vector<Baseline> out;
  std::stringstream ss(arg);
  std::string tag;
  while (std::getline(ss, tag, ',')) out.push_back(baseline_from_string(tag));
  return out;
}

int cmd_run(const std::string& config_name, std::uint64_t seed, const std::string& baselines,
            std::optional<double> tol, std::optional<int> max_iter, const std::string& out_path) {
  SystemConfig config = load_config(config_name);
  if (tol) config.tol = *tol;
  if (max_iter) config.max_iters = *max_iter;
  config.validate();
  const RunSeeds seeds = run_seeds(seed, 0, false);
  std::vector<AlgorithmTrace> traces;
  const std::vector<RunRecord> records = run_realization(config, parse_baselines(baselines), seeds, &traces);
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    nlohmann::json j = to_json(records[i]);
    j["trace"] = trace_to_json(traces[i]);
    doc.push_back(j);
    std::cout << records[i].baseline << ": " << records[i].status << ", omega_hat " << records[i].omega_hat << ", "
              << records[i].iterations << " iterations, feasible " << (records[i].feasible ? "yes" : "no") << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& figure, const std::string& scale,
              std::optional<int> runs, int jobs, const std::string& out_dir, std::optional<std::uint64_t> seed,
              bool median, bool freeze) {
  SweepSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot read " + spec_path);
    spec = sweep_spec_from_json(nlohmann::json::parse(in));
  } else if (!figure.empty()) {
    spec = figure_protocol(figure, scale);
  } else {
    throw std::invalid_argument("sweep needs --spec or --figure");
  }
  if (runs) spec.runs = *runs;
  if (seed) spec.master_seed = *seed;
  spec.jobs = jobs;
  spec.out_dir = out_dir;
  spec.use_median = spec.use_median || median;
  spec.freeze_geometry = spec.freeze_geometry || freeze;
  const SweepResult res = run_sweep(spec);
  std::cout << kCsvHeader << "\n";
  for (const auto& r : res.rows)
    std::cout << r.param << ',' << r.value << ',' << r.baseline << ',' << r.mean_omega << ',' << r.stderr_omega << ','
              << r.mean_iters << ',' << r.n_infeasible << ',' << r.n_runs << "\n";
  return 0;
}

int cmd_selftest(unsigned seed) {
  int failures = 0;
  for (const auto& r : run_selftests(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    failures += r.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

int cmd_dump(const std::string& config_name, std::uint64_t seed, const std::string& baseline, const std::string& step,
             int iterations, const std::string& out_path) {
  const SystemConfig config = load_config(config_name);
  config.validate();
  const conic::ConicProgram prog = program_for_realization(config, run_seeds(seed, 0, false),
                                                           baseline_from_string(baseline),
                                                           dump_step_from_string(step), iterations);
  const conic::CanonicalProgram cp = conic::canonicalize(prog);
  if (out_path.empty() || out_path == "-")
    conic::write_program(std::cout, cp);
  else
    conic::save_program(cp, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure RSMA ISAC with STAR-RIS: alternating optimization and Monte Carlo sweeps"};
  app.require_subcommand(1);

  std::string config_name = "desk";
  std::uint64_t seed = 20251022;
  std::string baselines = "rsma-star-opt";
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::string out_path;
  auto* run = app.add_subcommand("run", "single realization");
  run->add_option("--config", config_name, "preset (desk, paper-default) or JSON file");
  run->add_option("--seed", seed, "master seed of the realization");
  run->add_option("--baseline", baselines, "baseline tag, comma list or 'all'");
  run->add_option("--tol", tol, "stopping threshold on |delta omega|");
  run->add_option("--max-iter", max_iter, "iteration cap");
  run->add_option("--out", out_path, "JSON output with run records and traces");

  std::string spec_path;
  std::string figure;
  std::string scale = "desk";
  std::optional<int> runs;
  int jobs = 1;
  std::string out_dir = "results";
  std::optional<std::uint64_t> sweep_seed;
  bool median = false;
  bool freeze = false;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  sweep->add_option("--spec", spec_path, "sweep spec JSON");
  sweep->add_option("--figure", figure, "fig2, fig3a, fig3b, fig3c or fig3d");
  sweep->add_option("--scale", scale, "desk or paper");
  sweep->add_option("--runs", runs, "realizations per point");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--out", out_dir, "output directory for the CSV and JSONL files");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_flag("--median", median, "report medians in the mean_omega column");
  sweep->add_flag("--freeze-geometry", freeze, "one geometry for all runs");

  unsigned selftest_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "invariant suites");
  selftest->add_option("--seed", selftest_seed);

  std::string dump_baseline = "rsma-star-opt";
  std::string step = "w";
  int iterations = 0;
  std::string dump_out;
  std::string dump_config = "desk";
  std::uint64_t dump_seed = 20251022;
  auto* dump = app.add_subcommand("dump-program", "canonical form of one subproblem");
  dump->add_option("--config", dump_config);
  dump->add_option("--seed", dump_seed);
  dump->add_option("--baseline", dump_baseline);
  dump->add_option("--step", step, "sensing, w, v, v-conv or restoration");
  dump->add_option("--iterations", iterations, "AO iterations before building");
  dump->add_option("--out", dump_out, "output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_name, seed, baselines, tol, max_iter, out_path);
    if (*sweep) return cmd_sweep(spec_path, figure, scale, runs, jobs, out_dir, sweep_seed, median, freeze);
    if (*selftest) return cmd_selftest(selftest_seed);
    if (*dump) return cmd_dump(dump_config, dump_seed, dump_baseline, step, iterations, dump_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
