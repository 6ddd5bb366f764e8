#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "secisac/driver.hpp"
#include "secisac/scenario.hpp"

namespace secisac {

enum class SweepParam { power_dbm, n_ris_elements, n_bs_antennas, n_comm_users, beampattern_ratio_db, n_sense_targets };

std::string to_string(SweepParam param);
SweepParam sweep_param_from_string(const std::string& name);

// Writes `value` into the matching config field (all targets for the ratio).
void apply_param(SystemConfig& config, SweepParam param, double value);

struct SweepAxis {
  SweepParam param = SweepParam::power_dbm;
  std::vector<double> values;
};

struct SweepSpec {
  std::string name = "sweep";
  SystemConfig base;
  SweepAxis axis;
  std::optional<SweepAxis> secondary;  // e.g. K_s alongside the ratio sweep
  std::vector<Baseline> baselines;
  int runs = 20;
  std::uint64_t master_seed = 20251022;
  std::string out_dir;  // empty: nothing written
  int jobs = 1;
  bool freeze_geometry = false;  // one geometry per sweep instead of one per run
  bool use_median = false;       // report medians in the mean_omega column

  // Throws std::invalid_argument for empty value lists, runs < 1 or no baselines.
  void validate() const;
};

struct RunRecord {
  std::string param;          // CSV label of the sweep point
  double value = 0.0;
  std::optional<double> secondary_value;
  int run_index = 0;
  std::uint64_t seed = 0;
  std::string baseline;
  nlohmann::json scenario;    // parameters of the realization
  std::string status;
  double omega_hat = 0.0;
  int iterations = 0;
  std::vector<double> omega;         // per-iteration program omega
  std::vector<double> omega_oracle;  // per-iteration oracle value
  double initial_omega = 0.0;
  double solve_time_s = 0.0;
  bool feasible = false;
  std::string diagnostics;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);
RunRecord make_run_record(const AlgorithmTrace& trace, const SystemConfig& config, std::uint64_t seed);

struct AggregateRow {
  std::string param;
  double value = 0.0;
  std::string baseline;
  double mean_omega = 0.0;
  double stderr_omega = 0.0;
  double mean_iters = 0.0;
  int n_infeasible = 0;
  int n_runs = 0;
};

struct SweepResult {
  std::vector<RunRecord> records;
  std::vector<AggregateRow> rows;
};

// Label used in the param column: the swept field, with the secondary axis
// appended as "name[other=value]".
std::string point_label(const SweepSpec& spec, std::optional<double> secondary_value);

// Seeds of one realization: geometry, channels, initial point.
struct RunSeeds {
  std::uint64_t run = 0;
  std::uint64_t geometry = 0;
  std::uint64_t channels = 0;
  std::uint64_t init = 0;
};
RunSeeds run_seeds(std::uint64_t master_seed, int run_index, bool freeze_geometry);

// All baselines of one realization on shared channels.
std::vector<RunRecord> run_realization(const SystemConfig& config, const std::vector<Baseline>& baselines,
                                       const RunSeeds& seeds, std::vector<AlgorithmTrace>* traces = nullptr);

enum class DumpStep { sensing, w_step, v_step, v_step_conventional, restoration };
DumpStep dump_step_from_string(const std::string& name);

// Program of the requested kind for one realization, expanded at the
// restored initial point advanced by `iterations` AO iterations.
conic::ConicProgram program_for_realization(const SystemConfig& config, const RunSeeds& seeds, Baseline baseline,
                                            DumpStep step, int iterations = 0);

// Groups records by (param, value, baseline) in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool use_median = false);

SweepResult run_sweep(const SweepSpec& spec);

// {"name", "config" (preset name or config object), "param", "values",
//  "secondary": {"param", "values"}, "baselines", "runs", "master_seed",
//  "jobs", "freeze_geometry", "median"}; missing keys keep the defaults.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepSpec& spec);

// name: fig2, fig3a, fig3b, fig3c, fig3d; scale: desk, paper.
SweepSpec figure_protocol(const std::string& name, const std::string& scale);
const std::vector<std::string>& figure_names();

inline constexpr const char* kCsvHeader = "param,value,baseline,mean_omega,stderr_omega,mean_iters,n_infeasible,n_runs";

void write_csv(const std::string& path, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_csv(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_jsonl(const std::string& path);

}  // namespace secisac
