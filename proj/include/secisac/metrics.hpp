#pragma once

#include <string>
#include <vector>

#include "secisac/channel.hpp"
#include "secisac/design.hpp"
#include "secisac/scenario.hpp"

namespace secisac {

// Rates are in bits/s/Hz; interference terms are noise-normalized powers.
struct RateReport {
  std::vector<double> common_rate;                 // R_c,k
  std::vector<double> private_rate;                // R_p,k
  std::vector<double> eaves_common;                // R_c^{e,j}
  std::vector<std::vector<double>> eaves_private;  // [k][j] -> R_p,k^{e,j}
  std::vector<double> secrecy_common;              // R_c,k^sec
  std::vector<double> secrecy_private;             // R_p,k^sec
  std::vector<double> total_secrecy;               // R_k = r_k + R_p,k^sec
  std::vector<double> e_common;                    // E_c,k
  std::vector<double> e_private;                   // E_p,k
  std::vector<double> d_target;                    // D_j
};

struct SensingReport {
  std::vector<double> gain;
  std::vector<double> gain_opt;
  std::vector<double> d_opt;
  std::vector<double> ratio;
};

double transmit_power(const DesignPoint& dp);

// |v_k^H G_k w|^2 style helpers on a precomputed effective channel.
double received_power(const CVec& effective, const CVec& beam);

// Fills the communication part (rates and E terms) of `report`.
void stream_rates(const ChannelSet& channels, const DesignPoint& dp, RateReport& report);
RateReport stream_rates(const ChannelSet& channels, const DesignPoint& dp);

// Fills the eavesdropping part (D_j and eavesdropping rates) of `report`.
void eavesdrop_rates(const ChannelSet& channels, const DesignPoint& dp, RateReport& report);

// D_j(R_s, W) = g_j^H R_s g_j + |g_j^H w_c|^2 + sum_i |g_j^H w_p,i|^2 + 1
double eavesdropper_interference(const CVec& g, const DesignPoint& dp);

// Secrecy rates with the [.]^+ clamp and R_k = r_k + R_p,k^sec.
void secrecy_rates(RateReport& report, const std::vector<double>& rate_split);

// All three stages in order.
RateReport evaluate_rates(const ChannelSet& channels, const DesignPoint& dp);

double beampattern_gain(const ChannelSet& channels, const DesignPoint& dp, int target);

SensingReport sensing_report(const ChannelSet& channels, const DesignPoint& dp,
                             const std::vector<double>& gain_opt, const std::vector<double>& d_opt);

struct ConstraintSlack {
  std::string name;
  int index = -1;
  double slack = 0.0;  // >= 0 when satisfied
};

struct FeasibilityLedger {
  std::vector<ConstraintSlack> entries;

  double worst() const;
  bool feasible(double tau) const { return worst() >= -tau; }
  std::vector<ConstraintSlack> violations(double tau) const;
};

// Signed slacks of every constraint of the max-min secrecy problem.
// The private-secrecy entry uses the unclamped difference R_p,k - max_j R_p,k^{e,j};
// the beampattern entry is G_j / G_j^opt - eta_j.
FeasibilityLedger check_feasibility(const ChannelSet& channels, const DesignPoint& dp, const RateReport& report,
                                    const SensingReport& sensing, const SystemConfig& config);

}  // namespace secisac
