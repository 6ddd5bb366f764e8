#include "secisac/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace secisac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SystemConfig: " + what);
}

}  // namespace

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }
double linear_to_db(double value) { return 10.0 * std::log10(value); }
double dbm_to_watts(double value_dbm) { return db_to_linear(value_dbm) / 1000.0; }
double watts_to_dbm(double watts) { return linear_to_db(watts * 1000.0); }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double SystemConfig::power_budget_w() const { return dbm_to_watts(power_budget_dbm); }
double SystemConfig::noise_comm_w() const { return dbm_to_watts(noise_comm_dbm); }
double SystemConfig::noise_sense_w() const { return dbm_to_watts(noise_sense_dbm); }

double SystemConfig::beampattern_ratio(int target) const {
  return db_to_linear(beampattern_ratio_db.at(static_cast<std::size_t>(target)));
}

void SystemConfig::validate() const {
  require(n_bs_antennas >= 1, "n_bs_antennas must be >= 1");
  require(n_ris_elements >= 1, "n_ris_elements must be >= 1");
  require(n_ris_elements % 2 == 0, "n_ris_elements must be even");
  require(n_comm_users >= 1, "n_comm_users must be >= 1");
  require(n_sense_targets >= 1, "n_sense_targets must be >= 1");
  require(std::isfinite(power_budget_dbm) && power_budget_w() > 0.0, "power budget must be positive");
  require(std::isfinite(noise_comm_dbm) && std::isfinite(noise_sense_dbm), "noise levels must be finite");
  require(tol > 0.0, "tol must be positive");
  require(max_iters >= 1, "max_iters must be >= 1");
  require(pathloss_ref > 0.0, "pathloss_ref must be positive");
  require(element_spacing_wavelengths > 0.0, "element spacing must be positive");
  const auto n_targets = static_cast<std::size_t>(n_sense_targets);
  require(beampattern_ratio_db.size() == n_targets, "beampattern_ratio_db needs one entry per target");
  for (int j = 0; j < n_sense_targets; ++j) {
    const double eta = beampattern_ratio(j);
    require(eta > 0.0 && eta < 1.0, "beampattern ratio must lie in (0, 1)");
  }
  require(layout.target_angles_rad.size() == n_targets, "target_angles needs one entry per target");
  require(layout.target_distances_m.size() == n_targets, "target_distances needs one entry per target");
  for (double d : layout.target_distances_m) require(d >= 1.0, "target distance must be >= 1 m");
  require(layout.cu_radius_m > layout.cu_min_distance_m, "cu_radius_m must exceed cu_min_distance_m");
  require(layout.cu_min_distance_m >= 1.0, "cu_min_distance_m must be >= 1 m");
  require(distance(layout.bs_position, layout.ris_position) >= 1.0, "BS and RIS must be >= 1 m apart");
}

std::vector<double> default_target_angles_rad(int count) {
  static const double kDegrees[] = {30.0, -30.0, 0.0, 60.0, -60.0, 15.0, -15.0, 45.0, -45.0};
  std::vector<double> out;
  for (int j = 0; j < count; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j) % std::size(kDegrees);
    out.push_back(deg_to_rad(kDegrees[idx]));
  }
  return out;
}

void resize_targets(SystemConfig& config, int n_targets) {
  const double ratio = config.beampattern_ratio_db.empty() ? -1.0 : config.beampattern_ratio_db.front();
  const double dist = config.layout.target_distances_m.empty() ? 50.0 : config.layout.target_distances_m.front();
  config.n_sense_targets = n_targets;
  config.beampattern_ratio_db.assign(static_cast<std::size_t>(n_targets), ratio);
  config.layout.target_angles_rad = default_target_angles_rad(n_targets);
  config.layout.target_distances_m.assign(static_cast<std::size_t>(n_targets), dist);
}

SystemConfig paper_default_config() {
  SystemConfig c;
  c.n_bs_antennas = 8;
  c.n_ris_elements = 32;
  c.n_comm_users = 6;
  c.n_sense_targets = 2;
  c.power_budget_dbm = 30.0;
  c.noise_comm_dbm = -80.0;
  c.noise_sense_dbm = -80.0;
  c.beampattern_ratio_db = {-1.0, -1.0};
  c.rician_k_db = 5.0;
  c.pathloss_ref = 1e-3;
  c.pathloss_exp_default = 2.2;
  c.pathloss_exp_bs_cu = 4.0;
  c.element_spacing_wavelengths = 0.5;
  c.max_iters = 20;
  c.tol = 1e-4;
  c.layout.bs_position = {0.0, 0.0};
  c.layout.ris_position = {30.0, 30.0};
  c.layout.cu_radius_m = 10.0;
  c.layout.target_angles_rad = {deg_to_rad(30.0), deg_to_rad(-30.0)};
  c.layout.target_distances_m = {50.0, 50.0};
  return c;
}

SystemConfig desk_config() {
  SystemConfig c = paper_default_config();
  c.n_bs_antennas = 4;
  c.n_ris_elements = 8;
  c.n_comm_users = 2;
  return c;
}

std::vector<int> Geometry::users_in(Region region) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < cu_regions.size(); ++k)
    if (cu_regions[k] == region) out.push_back(static_cast<int>(k));
  return out;
}

Point2 ris_normal(const Point2& bs, const Point2& ris) {
  const double len = distance(bs, ris);
  return {(ris.x - bs.x) / len, (ris.y - bs.y) / len};
}

Region classify_region(const Point2& bs, const Point2& ris, const Point2& p) {
  const Point2 n = ris_normal(bs, ris);
  const double side = (p.x - ris.x) * n.x + (p.y - ris.y) * n.y;
  return side > 0.0 ? Region::transmission : Region::reflection;
}

Geometry sample_geometry(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const SceneLayout& lay = config.layout;
  Geometry g;
  g.bs_position = lay.bs_position;
  g.ris_position = lay.ris_position;
  g.target_angles = lay.target_angles_rad;
  g.target_distances = lay.target_distances_m;

  const int want_t = (config.n_comm_users + 1) / 2;
  const int want_r = config.n_comm_users / 2;
  int have_t = 0;
  int have_r = 0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kMaxDraws = 10000;
  for (int draw = 0; draw < kMaxDraws && have_t + have_r < config.n_comm_users; ++draw) {
    // Uniform in the disc: radius ~ R sqrt(U).
    const double radius = lay.cu_radius_m * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Point2 p{lay.ris_position.x + radius * std::cos(phi), lay.ris_position.y + radius * std::sin(phi)};
    if (radius < lay.cu_min_distance_m) continue;
    if (distance(p, lay.bs_position) < 1.0) continue;
    const Region region = classify_region(lay.bs_position, lay.ris_position, p);
    if (region == Region::transmission && have_t < want_t) {
      ++have_t;
    } else if (region == Region::reflection && have_r < want_r) {
      ++have_r;
    } else {
      continue;
    }
    g.cu_positions.push_back(p);
    g.cu_regions.push_back(region);
  }
  if (have_t + have_r < config.n_comm_users)
    throw std::runtime_error("sample_geometry: could not place users with the requested region split");
  return g;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  // splitmix64 is a bijection, so distinct indices map to distinct seeds.
  return splitmix64(splitmix64(master_seed) + 0x9E3779B97F4A7C15ULL * run_index);
}

}  // namespace secisac
