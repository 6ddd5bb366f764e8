#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secisac/design.hpp"
#include "secisac/scenario.hpp"
#include "secisac/types.hpp"

namespace secisac {

// One channel realization. Raw channels are in linear amplitude; g_cu and
// g_target are divided by the receiver noise standard deviation so that every
// rate formula sees unit-power noise.
struct ChannelSet {
  CMat h_bs_ris;                  // N_S x N_B
  std::vector<CVec> h_bs_cu;      // K_c x (N_B)
  std::vector<CVec> h_ris_cu;     // K_c x (N_S)
  std::vector<CVec> h_bs_target;  // K_s x (N_B), pure LoS
  std::vector<CMat> g_cu;         // K_c x ((N_S+1) x N_B)
  std::vector<CVec> g_target;     // K_s x (N_B)
  std::vector<CVec> steer_target; // K_s x (N_B)
  std::vector<Region> cu_regions;
  double noise_comm_std = 1.0;
  double noise_sense_std = 1.0;

  int n_bs() const { return static_cast<int>(h_bs_ris.cols()); }
  int n_elements() const { return static_cast<int>(h_bs_ris.rows()); }
  int n_users() const { return static_cast<int>(g_cu.size()); }
  int n_targets() const { return static_cast<int>(g_target.size()); }
};

CVec steering_vector(double theta, int n, double spacing);

// Response of an Ny x Nz planar array to azimuth `azimuth` (elevation 0),
// elements ordered with the y index fastest.
CVec planar_steering_vector(double azimuth, int ny, int nz, double spacing);

// Largest divisor of n that does not exceed sqrt(n).
int upa_rows(int n);

// Throws std::invalid_argument for distances below 1 m.
double pathloss(double distance_m, double exponent, double ref_gain);

// Rician mixing weights {LoS, NLoS} for a K-factor in dB (+inf allowed).
std::pair<double, double> rician_weights(double k_db);

ChannelSet sample_channels(const SystemConfig& config, const Geometry& geometry, std::uint64_t seed);

// G_k = sigma^-1 [H^H diag(h_S), h_B]^H
CMat assemble_cu_matrix(const CMat& h_bs_ris, const CVec& h_ris_cu, const CVec& h_bs_cu, double noise_std);

// G_k^H v_k, i.e. the conjugated row acting on the transmit signal.
CVec effective_cu_channel(const ChannelSet& channels, const StarProfile& star, int user);

const CVec& profile_for(const StarProfile& star, Region region);

// Text archive: "secisac-channels <version>" header followed by tagged
// matrices with explicit shapes; values printed with 17 significant digits.
void save_channels(const ChannelSet& channels, const std::string& path);
ChannelSet load_channels(const std::string& path);
inline constexpr int kChannelArchiveVersion = 1;

}  // namespace secisac
