#include "secisac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "secisac/channel.hpp"
#include "secisac/config_io.hpp"

namespace secisac {

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::power_dbm: return "power_dbm";
    case SweepParam::n_ris_elements: return "n_ris_elements";
    case SweepParam::n_bs_antennas: return "n_bs_antennas";
    case SweepParam::n_comm_users: return "n_comm_users";
    case SweepParam::beampattern_ratio_db: return "beampattern_ratio_db";
    case SweepParam::n_sense_targets: return "n_sense_targets";
  }
  return "?";
}

SweepParam sweep_param_from_string(const std::string& name) {
  for (SweepParam p : {SweepParam::power_dbm, SweepParam::n_ris_elements, SweepParam::n_bs_antennas,
                       SweepParam::n_comm_users, SweepParam::beampattern_ratio_db, SweepParam::n_sense_targets})
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown sweep parameter: " + name);
}

void apply_param(SystemConfig& config, SweepParam param, double value) {
  const int count = static_cast<int>(std::lround(value));
  switch (param) {
    case SweepParam::power_dbm: config.power_budget_dbm = value; break;
    case SweepParam::n_ris_elements: config.n_ris_elements = count; break;
    case SweepParam::n_bs_antennas: config.n_bs_antennas = count; break;
    case SweepParam::n_comm_users: config.n_comm_users = count; break;
    case SweepParam::beampattern_ratio_db:
      std::fill(config.beampattern_ratio_db.begin(), config.beampattern_ratio_db.end(), value);
      break;
    case SweepParam::n_sense_targets: resize_targets(config, count); break;
  }
}

void SweepSpec::validate() const {
  if (axis.values.empty()) throw std::invalid_argument("sweep: empty value list");
  if (secondary && secondary->values.empty()) throw std::invalid_argument("sweep: empty secondary value list");
  if (runs < 1) throw std::invalid_argument("sweep: runs must be >= 1");
  if (baselines.empty()) throw std::invalid_argument("sweep: no baselines");
  if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

nlohmann::json scenario_json(const SystemConfig& c) {
  return {{"n_bs_antennas", c.n_bs_antennas},       {"n_ris_elements", c.n_ris_elements},
          {"n_comm_users", c.n_comm_users},         {"n_sense_targets", c.n_sense_targets},
          {"power_budget_dbm", c.power_budget_dbm}, {"beampattern_ratio_db", c.beampattern_ratio_db},
          {"max_iters", c.max_iters},               {"tol", c.tol}};
}

}  // namespace

std::string point_label(const SweepSpec& spec, std::optional<double> secondary_value) {
  std::string label = to_string(spec.axis.param);
  if (spec.secondary && secondary_value) label += "[" + to_string(spec.secondary->param) + "=" + fmt(*secondary_value) + "]";
  return label;
}

RunSeeds run_seeds(std::uint64_t master_seed, int run_index, bool freeze_geometry) {
  RunSeeds s;
  s.run = derive_run_seed(master_seed, static_cast<std::uint64_t>(run_index));
  s.geometry = freeze_geometry ? derive_run_seed(derive_run_seed(master_seed, ~0ULL), 0) : derive_run_seed(s.run, 0);
  s.channels = derive_run_seed(s.run, 1);
  s.init = derive_run_seed(s.run, 2);
  return s;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["param"] = r.param;
  j["value"] = r.value;
  j["secondary_value"] = r.secondary_value ? nlohmann::json(*r.secondary_value) : nlohmann::json(nullptr);
  j["run_index"] = r.run_index;
  j["seed"] = r.seed;
  j["baseline"] = r.baseline;
  j["scenario"] = r.scenario;
  j["status"] = r.status;
  j["omega_hat"] = r.omega_hat;
  j["iterations"] = r.iterations;
  j["omega"] = r.omega;
  j["omega_oracle"] = r.omega_oracle;
  j["initial_omega"] = r.initial_omega;
  j["solve_time_s"] = r.solve_time_s;
  j["feasible"] = r.feasible;
  j["diagnostics"] = r.diagnostics;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.param = j.at("param").get<std::string>();
  r.value = j.at("value").get<double>();
  if (!j.at("secondary_value").is_null()) r.secondary_value = j.at("secondary_value").get<double>();
  r.run_index = j.at("run_index").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.baseline = j.at("baseline").get<std::string>();
  r.scenario = j.at("scenario");
  r.status = j.at("status").get<std::string>();
  r.omega_hat = j.at("omega_hat").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.omega = j.at("omega").get<std::vector<double>>();
  r.omega_oracle = j.at("omega_oracle").get<std::vector<double>>();
  r.initial_omega = j.at("initial_omega").get<double>();
  r.solve_time_s = j.at("solve_time_s").get<double>();
  r.feasible = j.at("feasible").get<bool>();
  r.diagnostics = j.at("diagnostics").get<std::string>();
  return r;
}

RunRecord make_run_record(const AlgorithmTrace& trace, const SystemConfig& config, std::uint64_t seed) {
  RunRecord r;
  r.seed = seed;
  r.baseline = to_string(trace.baseline);
  r.scenario = scenario_json(config);
  r.status = to_string(trace.status);
  r.omega_hat = trace.omega_hat;
  r.iterations = trace.iterations;
  for (const auto& rec : trace.records) {
    r.omega.push_back(rec.omega);
    r.omega_oracle.push_back(rec.omega_oracle);
  }
  r.initial_omega = trace.initial_omega;
  r.solve_time_s = trace.solve_time_s;
  r.feasible = trace.feasible && trace.status != TraceStatus::infeasible;
  r.diagnostics = trace.diagnostics;
  return r;
}

std::vector<RunRecord> run_realization(const SystemConfig& config, const std::vector<Baseline>& baselines,
                                       const RunSeeds& seeds, std::vector<AlgorithmTrace>* traces) {
  std::vector<RunRecord> out;
  const Geometry geometry = sample_geometry(config, seeds.geometry);
  const ChannelSet channels = sample_channels(config, geometry, seeds.channels);
  const AoOptions options = AoOptions::from_config(config, seeds.init);
  const SensingConsts consts = sensing_only(channels, config, options.solver);
  for (Baseline b : baselines) {
    AlgorithmTrace trace = run_ao(channels, config, b, consts, options);
    out.push_back(make_run_record(trace, config, seeds.run));
    if (traces) traces->push_back(std::move(trace));
  }
  return out;
}

DumpStep dump_step_from_string(const std::string& name) {
  if (name == "sensing") return DumpStep::sensing;
  if (name == "w") return DumpStep::w_step;
  if (name == "v") return DumpStep::v_step;
  if (name == "v-conv") return DumpStep::v_step_conventional;
  if (name == "restoration") return DumpStep::restoration;
  throw std::invalid_argument("unknown step: " + name + " (sensing, w, v, v-conv, restoration)");
}

conic::ConicProgram program_for_realization(const SystemConfig& config, const RunSeeds& seeds, Baseline baseline,
                                            DumpStep step, int iterations) {
  const ChannelSet channels = sample_channels(config, sample_geometry(config, seeds.geometry), seeds.channels);
  const SensingConsts consts = sensing_only(channels, config);
  if (step == DumpStep::sensing) return sensing_program(channels);
  DesignPoint dp = initial_design(channels, config, baseline, seeds.init);
  DesignPoint pinned = dp;
  const BuildPlan plan = apply_baseline(pinned, baseline);
  if (step == DumpStep::restoration) return build_w_step(channels, dp, consts, config, plan, 1e3).program;
  const RestorationResult rest = restore_feasibility(channels, dp, consts, config, plan);
  if (!rest.restored) throw std::runtime_error("restoration failed: " + rest.diagnosis);
  dp = rest.design;
  for (int it = 0; it < iterations; ++it) {
    const SubproblemSolution sw = solve_step(build_w_step(channels, dp, consts, config, plan));
    if (!sw.ok()) break;
    dp = sw.design;
    if (!plan.optimize_v) continue;
    const SubproblemSolution sv = solve_step(build_v_step(channels, dp, consts, config, plan));
    if (!sv.ok()) break;
    dp = sv.design;
  }
  switch (step) {
    case DumpStep::w_step: return build_w_step(channels, dp, consts, config, plan).program;
    case DumpStep::v_step: return build_v_step(channels, dp, consts, config, plan).program;
    case DumpStep::v_step_conventional: return build_v_step_conventional(channels, dp, consts, config, plan).program;
    default: break;
  }
  throw std::logic_error("unreachable dump step");
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool use_median) {
  std::vector<AggregateRow> rows;
  std::map<std::tuple<std::string, double, std::string>, std::vector<const RunRecord*>> groups;
  std::vector<std::tuple<std::string, double, std::string>> order;
  for (const auto& r : records) {
    auto key = std::make_tuple(r.param, r.value, r.baseline);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    AggregateRow row;
    std::tie(row.param, row.value, row.baseline) = key;
    row.n_runs = static_cast<int>(members.size());
    std::vector<double> omegas;
    double iters = 0.0;
    for (const RunRecord* r : members) {
      if (!r->feasible) {
        ++row.n_infeasible;
        continue;
      }
      omegas.push_back(r->omega_hat);
      iters += r->iterations;
    }
    const auto n = static_cast<double>(omegas.size());
    if (!omegas.empty()) {
      double sum = 0.0;
      for (double w : omegas) sum += w;
      const double mean = sum / n;
      double ss = 0.0;
      for (double w : omegas) ss += (w - mean) * (w - mean);
      row.stderr_omega = omegas.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      row.mean_iters = iters / n;
      if (use_median) {
        std::vector<double> sorted = omegas;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size() / 2;
        row.mean_omega = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
      } else {
        row.mean_omega = mean;
      }
    } else {
      row.mean_omega = std::nan("");
      row.stderr_omega = std::nan("");
      row.mean_iters = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Task {
    double value;
    std::optional<double> secondary;
    int run;
  };
  std::vector<Task> tasks;
  const std::vector<std::optional<double>> secondary_values = [&] {
    std::vector<std::optional<double>> v;
    if (spec.secondary)
      for (double s : spec.secondary->values) v.emplace_back(s);
    else
      v.emplace_back(std::nullopt);
    return v;
  }();
  for (const auto& sec : secondary_values)
    for (double value : spec.axis.values)
      for (int run = 0; run < spec.runs; ++run) tasks.push_back({value, sec, run});

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      SystemConfig config = spec.base;
      if (spec.secondary) apply_param(config, spec.secondary->param, *t.secondary);
      apply_param(config, spec.axis.param, t.value);
      const RunSeeds seeds = run_seeds(spec.master_seed, t.run, spec.freeze_geometry);
      std::vector<RunRecord> recs;
      try {
        config.validate();
        recs = run_realization(config, spec.baselines, seeds);
      } catch (const std::exception& e) {
        recs.clear();
        for (Baseline b : spec.baselines) {
          RunRecord r;
          r.seed = seeds.run;
          r.baseline = to_string(b);
          r.scenario = scenario_json(config);
          r.status = "error";
          r.diagnostics = e.what();
          recs.push_back(r);
        }
      }
      for (auto& r : recs) {
        r.param = point_label(spec, t.secondary);
        r.value = t.value;
        r.secondary_value = t.secondary;
        r.run_index = t.run;
      }
      results[i] = std::move(recs);
    }
  };
  const int jobs = std::min<int>(spec.jobs, static_cast<int>(tasks.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  SweepResult out;
  for (auto& recs : results)
    for (auto& r : recs) out.records.push_back(std::move(r));
  out.rows = aggregate(out.records, spec.use_median);
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    write_csv((std::filesystem::path(spec.out_dir) / (spec.name + ".csv")).string(), out.rows);
    write_jsonl((std::filesystem::path(spec.out_dir) / (spec.name + "_runs.jsonl")).string(), out.records);
  }
  return out;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec s;
  if (j.contains("config")) {
    const auto& c = j.at("config");
    s.base = c.is_string() ? load_config(c.get<std::string>()) : config_from_json(c);
  } else {
    s.base = desk_config();
  }
  s.master_seed = s.base.master_seed;
  s.name = j.value("name", s.name);
  s.axis.param = sweep_param_from_string(j.at("param").get<std::string>());
  s.axis.values = j.at("values").get<std::vector<double>>();
  if (j.contains("secondary") && !j.at("secondary").is_null()) {
    const auto& sec = j.at("secondary");
    s.secondary = SweepAxis{sweep_param_from_string(sec.at("param").get<std::string>()),
                            sec.at("values").get<std::vector<double>>()};
  }
  if (j.contains("baselines"))
    for (const auto& b : j.at("baselines")) s.baselines.push_back(baseline_from_string(b.get<std::string>()));
  else
    s.baselines = all_baselines();
  s.runs = j.value("runs", s.runs);
  s.master_seed = j.value("master_seed", s.master_seed);
  s.jobs = j.value("jobs", s.jobs);
  s.freeze_geometry = j.value("freeze_geometry", s.freeze_geometry);
  s.use_median = j.value("median", s.use_median);
  s.validate();
  return s;
}

nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["config"] = config_to_json(s.base);
  j["param"] = to_string(s.axis.param);
  j["values"] = s.axis.values;
  if (s.secondary) j["secondary"] = {{"param", to_string(s.secondary->param)}, {"values", s.secondary->values}};
  j["baselines"] = nlohmann::json::array();
  for (Baseline b : s.baselines) j["baselines"].push_back(to_string(b));
  j["runs"] = s.runs;
  j["master_seed"] = s.master_seed;
  j["jobs"] = s.jobs;
  j["freeze_geometry"] = s.freeze_geometry;
  j["median"] = s.use_median;
  return j;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2", "fig3a", "fig3b", "fig3c", "fig3d"};
  return names;
}

SweepSpec figure_protocol(const std::string& name, const std::string& scale) {
  const bool paper = scale == "paper";
  if (!paper && scale != "desk") throw std::invalid_argument("unknown scale: " + scale);
  SweepSpec s;
  s.name = name + "_" + scale;
  s.base = paper ? paper_default_config() : desk_config();
  s.runs = paper ? 200 : 20;
  s.master_seed = s.base.master_seed;
  const std::vector<Baseline> all = all_baselines();
  if (name == "fig2") {
    s.axis = {SweepParam::power_dbm, {s.base.power_budget_dbm}};
    s.baselines = {Baseline::rsma_star_opt, Baseline::rsma_ris_conv, Baseline::rsma_star_rand, Baseline::sdma_star_opt};
  } else if (name == "fig3a") {
    s.axis = {SweepParam::power_dbm, paper ? std::vector<double>{10, 15, 20, 25, 30} : std::vector<double>{10, 20, 30}};
    s.baselines = all;
  } else if (name == "fig3b") {
    s.axis = {SweepParam::n_ris_elements,
              paper ? std::vector<double>{8, 16, 32, 48, 64} : std::vector<double>{4, 8, 16}};
    s.baselines = {Baseline::rsma_star_opt, Baseline::rsma_ris_conv, Baseline::rsma_star_rand};
  } else if (name == "fig3c") {
    s.axis = {SweepParam::n_bs_antennas, paper ? std::vector<double>{4, 6, 8, 10, 12} : std::vector<double>{4, 6, 8}};
    s.secondary = SweepAxis{SweepParam::n_comm_users, paper ? std::vector<double>{4, 6} : std::vector<double>{2, 3}};
    s.baselines = {Baseline::rsma_star_opt, Baseline::sdma_star_opt};
  } else if (name == "fig3d") {
    s.axis = {SweepParam::beampattern_ratio_db,
              paper ? std::vector<double>{-3, -2, -1, -0.5, -0.3} : std::vector<double>{-3, -1, -0.3}};
    s.secondary = SweepAxis{SweepParam::n_sense_targets, {2, 3}};
    s.baselines = {Baseline::rsma_star_opt, Baseline::sdma_star_opt};
  } else {
    throw std::invalid_argument("unknown figure: " + name);
  }
  return s;
}

void write_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kCsvHeader << "\n";
  for (const auto& r : rows)
    out << r.param << ',' << fmt(r.value) << ',' << r.baseline << ',' << fmt(r.mean_omega) << ','
        << fmt(r.stderr_omega) << ',' << fmt(r.mean_iters) << ',' << r.n_infeasible << ',' << r.n_runs << "\n";
}

std::vector<AggregateRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header in " + path);
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw std::runtime_error("malformed CSV row: " + line);
    AggregateRow r;
    r.param = cells[0];
    r.value = parse_double(cells[1]);
    r.baseline = cells[2];
    r.mean_omega = parse_double(cells[3]);
    r.stderr_omega = parse_double(cells[4]);
    r.mean_iters = parse_double(cells[5]);
    r.n_infeasible = std::stoi(cells[6]);
    r.n_runs = std::stoi(cells[7]);
    rows.push_back(r);
  }
  return rows;
}

void write_jsonl(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : records) out << to_json(r).dump() << "\n";
}

std::vector<RunRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(run_record_from_json(nlohmann::json::parse(line)));
  return out;
}

}  // namespace secisac
