#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "secisac/channel.hpp"
#include "secisac/design.hpp"

namespace secisac {

enum class Stream { common, private_ };

// Coefficients of the concave minorant
//   R >= f + 2 Re(conj(b) u) - q E
// built at an expansion point with interference E_bar and useful signal u_bar.
struct MinorantCoefficients {
  double f = 0.0;
  double q = 0.0;
  cdouble b{0.0, 0.0};
  double e_bar = 1.0;
  cdouble u_bar{0.0, 0.0};
};

struct SurrogateCoefficients {
  std::vector<MinorantCoefficients> common;   // per user
  std::vector<MinorantCoefficients> private_; // per user

  const MinorantCoefficients& at(Stream s, int user) const {
    return s == Stream::common ? common.at(static_cast<std::size_t>(user))
                               : private_.at(static_cast<std::size_t>(user));
  }
};

// Auxiliary variables of the epigraph reformulation.
struct AuxState {
  double alpha_c = 0.0;
  std::vector<double> alpha_p;
  double beta_c = 0.0;
  std::vector<double> beta_p;
  std::vector<double> delta;  // >= 1
  std::vector<double> mu;
  double omega = 0.0;
};

class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form minorant for one stream. Throws ConditioningError when
// e_bar <= |u_bar|^2.
MinorantCoefficients minorant_coefficients(double e_bar, cdouble u_bar);

SurrogateCoefficients mm_coefficients(const ChannelSet& channels, const DesignPoint& expansion);

// Evaluates the minorant of `stream` for `user` at design `dp`.
double surrogate_rate(const SurrogateCoefficients& coeffs, const ChannelSet& channels, const DesignPoint& dp,
                      Stream stream, int user);

double surrogate_value(const MinorantCoefficients& c, cdouble u, double e);

// log2(delta) - log2(delta - |g^H w|^2); nullopt when the second argument is
// nonpositive (delta too small for this beam).
std::optional<double> eavesdrop_upper_bound(const CVec& g, const CVec& beam, double delta);

// First-order expansion of log2 at delta_bar, an upper bound on log2(delta).
double tangent_log(double delta, double delta_bar);

// 2 Re(w_bar^H g g^H w) - |g^H w_bar|^2, a lower bound on |g^H w|^2.
double quadratic_minorant(const CVec& w, const CVec& w_bar, const CVec& g);

// Auxiliaries at which every reformulation constraint is tight for `dp`.
AuxState tight_aux(const ChannelSet& channels, const DesignPoint& dp);

}  // namespace secisac
