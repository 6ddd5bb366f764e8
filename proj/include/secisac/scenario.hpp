#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secisac/types.hpp"

namespace secisac {

// Which side of the STAR-RIS a communication user is on.
enum class Region { transmission, reflection };

// Fixed part of the deployment: where the BS and RIS sit and where the
// sensing targets are. CU positions are drawn per realization.
struct SceneLayout {
  Point2 bs_position{0.0, 0.0};
  Point2 ris_position{30.0, 30.0};
  double cu_radius_m = 10.0;
  double cu_min_distance_m = 1.0;
  std::vector<double> target_angles_rad;  // azimuth from the BS array broadside (+x axis)
  std::vector<double> target_distances_m;
};

struct SystemConfig {
  int n_bs_antennas = 8;
  int n_ris_elements = 32;
  int n_comm_users = 6;
  int n_sense_targets = 2;

  double power_budget_dbm = 30.0;
  double noise_comm_dbm = -80.0;
  double noise_sense_dbm = -80.0;
  std::vector<double> beampattern_ratio_db;  // one entry per target
  double rician_k_db = 5.0;

  double pathloss_ref = 1e-3;
  double pathloss_exp_default = 2.2;
  double pathloss_exp_bs_cu = 4.0;
  double element_spacing_wavelengths = 0.5;

  int max_iters = 20;
  double tol = 1e-4;
  std::uint64_t master_seed = 20251022;

  SceneLayout layout;

  double power_budget_w() const;
  double noise_comm_w() const;
  double noise_sense_w() const;
  double beampattern_ratio(int target) const;

  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

// Every value of the published simulation setup.
SystemConfig paper_default_config();

// Reduced problem used for quick experiments and most tests.
SystemConfig desk_config();

// Default angle list used when the target count changes: +-30 deg first,
// then broadside, then +-60 deg.
std::vector<double> default_target_angles_rad(int count);

// Resizes the per-target vectors after n_sense_targets changed.
void resize_targets(SystemConfig& config, int n_targets);

struct Geometry {
  Point2 bs_position;
  Point2 ris_position;
  std::vector<Point2> cu_positions;
  std::vector<Region> cu_regions;
  std::vector<double> target_angles;     // radians
  std::vector<double> target_distances;  // meters

  std::vector<int> users_in(Region region) const;
};

double db_to_linear(double value_db);
double linear_to_db(double value);
double dbm_to_watts(double value_dbm);
double watts_to_dbm(double watts);
double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Unit normal of the RIS plane pointing into the transmission region
// (away from the BS).
Point2 ris_normal(const Point2& bs, const Point2& ris);

Region classify_region(const Point2& bs, const Point2& ris, const Point2& p);

Geometry sample_geometry(const SystemConfig& config, std::uint64_t seed);

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

}  // namespace secisac
