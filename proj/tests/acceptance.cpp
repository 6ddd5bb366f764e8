// Acceptance runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "secisac/conic/barrier.hpp"
#include "secisac/conic/dump.hpp"
#include "secisac/driver.hpp"
#include "secisac/harness.hpp"
#include "secisac/surrogate.hpp"
#include "support.hpp"

using namespace secisac;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// ---- shared desk-scale runs -------------------------------------------------

constexpr int kSeeds = 20;

struct RunSummary {
  double omega_hat = 0.0;
  double initial_omega = 0.0;
  std::vector<double> accepted;  // oracle values of the kept iterates
  int iterations = 0;
  TraceStatus status = TraceStatus::infeasible;
  bool feasible = false;
  bool rolled_back = false;
  double seconds = 0.0;
};

RunSummary summarize(const AlgorithmTrace& t, double seconds) {
  RunSummary s;
  s.omega_hat = t.omega_hat;
  s.initial_omega = t.initial_omega;
  s.iterations = t.iterations;
  s.status = t.status;
  s.feasible = t.feasible;
  s.rolled_back = t.rolled_back;
  s.seconds = seconds;
  const std::size_t kept = t.rolled_back ? t.records.size() - 1 : t.records.size();
  for (std::size_t i = 0; i < kept; ++i) s.accepted.push_back(t.records[i].omega_oracle);
  return s;
}

class DeskRuns {
 public:
  // Runs of `baseline` on seed `i` with config edited by `edit` (keyed by `point`).
  const RunSummary& get(const std::string& point, const std::function<void(SystemConfig&)>& edit, int i,
                        Baseline baseline) {
    const auto key = std::make_tuple(point, i, baseline);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    SystemConfig c = desk_config();
    edit(c);
    c.validate();
    const Realization r = desk_realization(i, c);
    const auto t0 = Clock::now();
    const SensingConsts consts = sensing_only(r.channels, c);
    const AlgorithmTrace t = run_ao(r.channels, c, baseline, consts, AoOptions::from_config(c, r.seeds.init));
    return cache_.emplace(key, summarize(t, seconds_since(t0))).first->second;
  }
  const RunSummary& base(int i, Baseline b) {
    return get("base", [](SystemConfig&) {}, i, b);
  }

 private:
  std::map<std::tuple<std::string, int, Baseline>, RunSummary> cache_;
};

// ---- criteria ----------------------------------------------------------------

Outcome surrogate_suite() {
  const auto t0 = Clock::now();
  double worst_gap = 0.0, worst_excess = -1e300;
  int expansions = 0, designs = 0;
  for (int e = 0; e < 100; ++e) {
    const Realization r = desk_realization(e % 20);
    const DesignPoint bar = random_design(4, 2, 8, r.config.power_budget_w(), 7000 + e);
    const SurrogateCoefficients c = mm_coefficients(r.channels, bar);
    const OracleRates at = oracle_rates(r.channels, bar);
    for (int k = 0; k < 2; ++k) {
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, r.channels, bar, Stream::common, k) - at.common[k]));
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, r.channels, bar, Stream::private_, k) - at.priv[k]));
    }
    ++expansions;
    for (int d = 0; d < 1000; ++d) {
      DesignPoint dp = random_design(4, 2, 8, r.config.power_budget_w(), 1000000ULL * (e + 1) + d);
      if (d % 2) dp.star = bar.star;  // half the samples share the expansion's reflection profile
      const OracleRates o = oracle_rates(r.channels, dp);
      for (int k = 0; k < 2; ++k) {
        worst_excess = std::max(worst_excess, surrogate_rate(c, r.channels, dp, Stream::common, k) - o.common[k]);
        worst_excess = std::max(worst_excess, surrogate_rate(c, r.channels, dp, Stream::private_, k) - o.priv[k]);
      }
      ++designs;
    }
  }

  bool grids = true;
  for (int i = 1; i <= 400 && grids; ++i)
    for (int j = 1; j <= 400; ++j) {
      const double d = 1.0 + 0.05 * i, db = 1.0 + 0.05 * j;
      if (tangent_log(d, db) < std::log2(d) - 1e-12) {
        grids = false;
        break;
      }
    }
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  auto cv = [&](int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cdouble(g(rng), g(rng));
    return v;
  };
  for (int t = 0; t < 20000 && grids; ++t) {
    const CVec w = cv(4), wb = cv(4), gg = cv(4);
    if (quadratic_minorant(w, wb, gg) > std::norm(oracle_inner(gg, w)) + 1e-9) grids = false;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = worst_gap <= 1e-9 && worst_excess <= 1e-9 && grids && secs < 60.0;
  o.detail = "tightness " + num(worst_gap) + " over " + std::to_string(expansions) + " expansions, max excess " +
             num(worst_excess) + " over " + std::to_string(designs) + " designs, grids " + (grids ? "ok" : "violated") +
             ", " + num(secs, 3) + " s";
  return o;
}

Outcome sensing_closed_forms() {
  const auto t0 = Clock::now();
  SystemConfig c = desk_config();
  c.power_budget_dbm = 30.0;
  const double p = c.power_budget_w();
  double worst = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);
  for (int nb : {2, 4, 8}) {
    const CVec a = steering_vector(angle(rng), nb, 0.5);
    const ChannelSet ch = manual_channels(CMat::Zero(2, nb), {CVec::Ones(nb)}, {CVec::Zero(2)},
                                          {Region::transmission}, {a}, {1.0});
    // hand solution: all power along a, gain P N_B
    const CMat hand = p * a * a.adjoint() / static_cast<double>(nb);
    const double hand_gain = oracle_quad(a, hand);
    const double expect = p * nb;
    worst = std::max(worst, std::abs(hand_gain - expect) / expect);
    worst = std::max(worst, std::abs(sensing_only(ch, c).gain_opt[0] - expect) / expect);
  }
  const CVec a1 = steering_vector(deg_to_rad(30.0), 2, 0.5);
  const CVec a2 = steering_vector(deg_to_rad(-30.0), 2, 0.5);
  const ChannelSet ch = manual_channels(CMat::Zero(2, 2), {CVec::Ones(2)}, {CVec::Zero(2)}, {Region::transmission},
                                        {a1, a2}, {1.0, 1.0});
  // orthogonal steering vectors: split power evenly, R = P/2 I
  const CMat hand = 0.25 * p * (a1 * a1.adjoint() + a2 * a2.adjoint());
  const SensingConsts s = sensing_only(ch, c);
  double pair_err = std::abs(oracle_inner(a1, a2));
  for (int j = 0; j < 2; ++j) {
    pair_err = std::max(pair_err, std::abs(oracle_quad(j ? a2 : a1, hand) - 1.0));
    pair_err = std::max(pair_err, std::abs(s.gain_opt[static_cast<std::size_t>(j)] - 1.0));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = worst <= 1e-6 && pair_err <= 1e-6 && secs < 10.0;
  o.detail = "single-target rel. error " + num(worst) + ", two-target error " + num(pair_err) + ", " + num(secs, 3) +
             " s";
  return o;
}

bool monotone(const RunSummary& s, double tol) {
  double prev = s.initial_omega;
  for (double w : s.accepted) {
    if (w < prev - tol) return false;
    prev = w;
  }
  return true;
}

Outcome ao_behavior(DeskRuns& runs) {
  double secs = 0.0;
  int non_monotone = 0, unconverged = 0, infeasible = 0, rollbacks = 0;
  std::vector<int> iters;
  for (int i = 0; i < kSeeds; ++i) {
    const RunSummary& s = runs.base(i, Baseline::rsma_star_opt);
    secs += s.seconds;
    non_monotone += !monotone(s, 1e-6);
    unconverged += s.status != TraceStatus::converged;
    infeasible += !s.feasible;
    rollbacks += s.rolled_back;
    iters.push_back(s.iterations);
  }
  std::sort(iters.begin(), iters.end());
  const double median = 0.5 * (iters[kSeeds / 2 - 1] + iters[kSeeds / 2]);
  Outcome o;
  o.passed = non_monotone == 0 && unconverged == 0 && infeasible == 0 && median <= 8.0 && secs < 900.0;
  o.detail = "median iterations " + num(median) + " (max " + std::to_string(iters.back()) + "), non-monotone " +
             std::to_string(non_monotone) + ", unconverged " + std::to_string(unconverged) + ", infeasible " +
             std::to_string(infeasible) + ", rollbacks " + std::to_string(rollbacks) + ", " + num(secs, 4) + " s";
  return o;
}

struct PairCheck {
  bool ok = true;
  std::string text;
};

// a >= b at the mean over seeds feasible for both, with at most 2 seed-level inversions.
PairCheck paired(const std::vector<double>& a, const std::vector<double>& b, const std::string& name) {
  double diff = 0.0;
  int inversions = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += a[i] - b[i];
    inversions += a[i] < b[i] - 1e-6;
  }
  const double mean = a.empty() ? 0.0 : diff / static_cast<double>(a.size());
  PairCheck p;
  p.ok = !a.empty() && mean >= 0.0 && inversions <= 2;
  p.text = name + " margin " + num(mean) + " inv " + std::to_string(inversions);
  return p;
}

Outcome baseline_ordering(DeskRuns& runs) {
  double secs = 0.0;
  std::map<Baseline, double> mean;
  for (Baseline b : all_baselines())
    for (int i = 0; i < kSeeds; ++i) secs += runs.base(i, b).seconds;
  auto pair = [&](Baseline hi, Baseline lo) {
    std::vector<double> a, b;
    for (int i = 0; i < kSeeds; ++i) {
      const RunSummary& x = runs.base(i, hi);
      const RunSummary& y = runs.base(i, lo);
      if (!x.feasible || !y.feasible) continue;
      a.push_back(x.omega_hat);
      b.push_back(y.omega_hat);
    }
    return paired(a, b, to_string(hi) + ">=" + to_string(lo));
  };
  std::vector<PairCheck> checks{pair(Baseline::rsma_star_opt, Baseline::rsma_ris_conv),
                                pair(Baseline::rsma_ris_conv, Baseline::rsma_star_rand),
                                pair(Baseline::rsma_star_rand, Baseline::rsma_no_ris),
                                pair(Baseline::rsma_star_opt, Baseline::sdma_star_opt)};
  Outcome o;
  o.passed = secs < 2700.0;
  for (const auto& c : checks) {
    o.passed = o.passed && c.ok;
    o.detail += c.text + "; ";
  }
  o.detail += "means";
  for (Baseline b : all_baselines()) {
    double s = 0.0;
    int n = 0;
    for (int i = 0; i < kSeeds; ++i)
      if (runs.base(i, b).feasible) {
        s += runs.base(i, b).omega_hat;
        ++n;
      }
    o.detail += " " + to_string(b) + "=" + num(n ? s / n : 0.0);
  }
  o.detail += "; " + num(secs, 4) + " s";
  return o;
}

Outcome trends(DeskRuns& runs) {
  const auto t0 = Clock::now();
  struct Sweep {
    std::string name;
    std::vector<double> values;
    std::function<void(SystemConfig&, double)> edit;
    bool increasing;
  };
  const std::vector<Sweep> sweeps{
      {"power_dbm", {10, 20, 30}, [](SystemConfig& c, double v) { apply_param(c, SweepParam::power_dbm, v); }, true},
      {"n_ris_elements", {4, 8, 16}, [](SystemConfig& c, double v) { apply_param(c, SweepParam::n_ris_elements, v); },
       true},
      {"beampattern_ratio_db", {-3, -1, -0.3},
       [](SystemConfig& c, double v) { apply_param(c, SweepParam::beampattern_ratio_db, v); }, false}};
  Outcome o;
  o.passed = true;
  for (const auto& sw : sweeps) {
    std::vector<std::vector<const RunSummary*>> at(sw.values.size());
    for (std::size_t v = 0; v < sw.values.size(); ++v)
      for (int i = 0; i < kSeeds; ++i) {
        const double value = sw.values[v];
        at[v].push_back(&runs.get(sw.name + "=" + num(value), [&](SystemConfig& c) { sw.edit(c, value); }, i,
                                  Baseline::rsma_star_opt));
      }
    o.detail += sw.name + ":";
    for (std::size_t v = 0; v + 1 < sw.values.size(); ++v) {
      std::vector<double> hi, lo;
      for (int i = 0; i < kSeeds; ++i) {
        const RunSummary& x = *at[v][static_cast<std::size_t>(i)];
        const RunSummary& y = *at[v + 1][static_cast<std::size_t>(i)];
        if (!x.feasible || !y.feasible) continue;
        hi.push_back(sw.increasing ? y.omega_hat : x.omega_hat);
        lo.push_back(sw.increasing ? x.omega_hat : y.omega_hat);
      }
      const PairCheck c = paired(hi, lo, num(sw.values[v]) + "->" + num(sw.values[v + 1]));
      o.passed = o.passed && c.ok;
      o.detail += " " + c.text + " (n=" + std::to_string(hi.size()) + ")";
    }
    o.detail += "; ";
  }
  o.detail += num(seconds_since(t0), 4) + " s";
  return o;
}

Outcome differential(const std::string& source_dir, const std::string& keep_dir) {
  const auto t0 = Clock::now();
  const auto dir = keep_dir.empty() ? std::filesystem::temp_directory_path() / "secisac_differential"
                                    : std::filesystem::path(keep_dir);
  std::filesystem::create_directories(dir);
  const std::string script = source_dir + "/tools/reference_solve.py";
  int agree = 0, total = 0;
  double worst = 0.0, loosest = 0.0;
  std::string failures;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> users(2, 3), elements(2, 5), iters(0, 2);
  std::uniform_real_distribution<double> power(15.0, 30.0);
  for (int n = 0; n < 25; ++n) {
    SystemConfig c = desk_config();
    c.n_comm_users = users(rng);
    c.n_ris_elements = 2 * elements(rng);
    c.power_budget_dbm = power(rng);
    const Baseline b = n % 5 == 4 ? Baseline::sdma_star_opt : Baseline::rsma_star_opt;
    const DumpStep step = n % 2 == 0 ? DumpStep::w_step : (n % 6 == 3 ? DumpStep::v_step_conventional : DumpStep::v_step);
    const RunSeeds seeds = run_seeds(c.master_seed + 17, n, false);
    const conic::CanonicalProgram cp =
        conic::canonicalize(program_for_realization(c, seeds, b, step, iters(rng)));
    const conic::SolveResult mine = conic::solve(cp);
    const auto path = dir / ("program_" + std::to_string(n) + ".txt");
    conic::save_program(cp, path.string());
    const std::string cmd = "python3 \"" + script + "\" \"" + path.string() + "\" 2>/dev/null";
    std::string output;
    if (FILE* pipe = popen(cmd.c_str(), "r")) {
      char buf[4096];
      while (fgets(buf, sizeof buf, pipe)) output += buf;
      pclose(pipe);
    }
    ++total;
    double ref = std::nan("");
    std::string ref_status = "no output";
    try {
      const auto j = nlohmann::json::parse(output);
      ref_status = j.at("status").get<std::string>();
      if (j.contains("tol")) loosest = std::max(loosest, j.at("tol").get<double>());
      if (ref_status == "optimal" && !j.at("objective").is_null()) ref = j.at("objective").get<double>();
    } catch (const std::exception&) {
    }
    const std::string tag = " #" + std::to_string(n) + "(" + conic::to_string(mine.status) + " " +
                            num(mine.objective, 10) + " vs " + ref_status + " " + num(ref, 10) + ")";
    if (!mine.has_primal() || std::isnan(ref)) {
      failures += tag;
      continue;
    }
    const double rel = std::abs(mine.objective - ref) / std::max(std::abs(ref), 1.0);
    worst = std::max(worst, rel);
    if (rel <= 1e-5)
      ++agree;
    else
      failures += tag;
  }
  if (keep_dir.empty()) std::filesystem::remove_all(dir);
  Outcome o;
  o.passed = agree == total && total == 25;
  o.detail = std::to_string(agree) + "/" + std::to_string(total) + " programs agree, worst rel. diff " + num(worst) +
             ", loosest reference tolerance " + num(loosest) +
             (failures.empty() ? "" : ", mismatched:" + failures) + ", " + num(seconds_since(t0), 3) + " s";
  return o;
}

Outcome paper_scale(nlohmann::json& anchors) {
  const auto t0 = Clock::now();
  const SystemConfig c = paper_default_config();
  const RunSeeds seeds = run_seeds(c.master_seed, 0, false);
  std::vector<AlgorithmTrace> traces;
  const std::vector<RunRecord> recs = run_realization(c, all_baselines(), seeds, &traces);
  const double secs = seconds_since(t0);
  bool feasible = true;
  std::string values;
  for (const auto& r : recs) {
    feasible = feasible && r.feasible;
    values += " " + r.baseline + "=" + num(r.omega_hat, 6) + "(" + r.status + "," + std::to_string(r.iterations) +
              " it)";
    anchors[r.baseline] = {{"omega_hat", r.omega_hat}, {"status", r.status}, {"iterations", r.iterations},
                           {"feasible", r.feasible}};
  }
  anchors["seed"] = seeds.run;
  anchors["seconds"] = secs;
  Outcome o;
  o.passed = feasible && recs.size() == all_baselines().size() && secs < 1800.0;
  o.detail = "omega_hat" + values + "; " + num(secs, 4) + " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> only;
  std::string report;
  std::string keep_dir;
  app.add_option("--only", only, "criteria to run (A1..A7)")->delimiter(',');
  app.add_option("--report", report, "JSON file for results and regression anchors");
  app.add_option("--keep-programs", keep_dir, "directory that keeps the dumped differential programs");
  CLI11_PARSE(app, argc, argv);

  DeskRuns runs;
  nlohmann::json anchors = nlohmann::json::object();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", [] { return surrogate_suite(); }},
      {"A2", [] { return sensing_closed_forms(); }},
      {"A3", [&] { return ao_behavior(runs); }},
      {"A4", [&] { return baseline_ordering(runs); }},
      {"A5", [&] { return trends(runs); }},
      {"A6", [&] { return differential(SECISAC_SOURCE_DIR, keep_dir); }},
      {"A7", [&] { return paper_scale(anchors); }},
  };
  const std::map<std::string, std::string> titles{{"A1", "surrogate suite"},     {"A2", "sensing closed forms"},
                                                  {"A3", "AO behavior"},         {"A4", "baseline ordering"},
                                                  {"A5", "trend checks"},        {"A6", "solver differential"},
                                                  {"A7", "paper-scale smoke"}};
  nlohmann::json out = nlohmann::json::object();
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.passed;
    std::cout << id << " " << (o.passed ? "PASS" : "FAIL") << " " << titles.at(id) << ": " << o.detail << std::endl;
    out[id] = {{"passed", o.passed}, {"detail", o.detail}};
  }
  if (!anchors.empty()) out["paper_scale_anchors"] = anchors;
  if (!report.empty()) std::ofstream(report) << out.dump(2) << "\n";
  return failed == 0 ? 0 : 1;
}
