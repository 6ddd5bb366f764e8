#include "secisac/channel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace secisac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed angle of `dir` relative to the unit `normal` (2-D).
double angle_from(const Point2& normal, double dx, double dy) {
  const double cross = normal.x * dy - normal.y * dx;
  const double dot = normal.x * dx + normal.y * dy;
  return std::atan2(cross, dot);
}

class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

  // CN(0, 1): independent real/imaginary parts with variance 1/2 each.
  cdouble operator()() {
    const double a = normal_(rng_);
    const double b = normal_(rng_);
    return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
  }

  CMat matrix(Eigen::Index rows, Eigen::Index cols) {
    CMat m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = (*this)();
    return m;
  }

  CVec vector(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

CVec steering_vector(double theta, int n, double spacing) {
  CVec a(n);
  const double phase = kTwoPi * std::sin(theta) * spacing;
  for (int m = 0; m < n; ++m) a[m] = std::polar(1.0, phase * m);
  return a;
}

CVec planar_steering_vector(double azimuth, int ny, int nz, double spacing) {
  // Elevation is zero in the 2-D scene, so only the horizontal index carries phase.
  const double elevation = 0.0;
  const double phase_y = kTwoPi * spacing * std::sin(azimuth) * std::cos(elevation);
  const double phase_z = kTwoPi * spacing * std::sin(elevation);
  CVec a(ny * nz);
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < ny; ++iy) a[iz * ny + iy] = std::polar(1.0, phase_y * iy + phase_z * iz);
  return a;
}

int upa_rows(int n) {
  int best = 1;
  for (int d = 1; d * d <= n; ++d)
    if (n % d == 0) best = d;
  return best;
}

double pathloss(double distance_m, double exponent, double ref_gain) {
  if (!(distance_m >= 1.0)) throw std::invalid_argument("pathloss: distance below the 1 m reference");
  return ref_gain * std::pow(distance_m, -exponent);
}

std::pair<double, double> rician_weights(double k_db) {
  if (std::isinf(k_db)) return k_db > 0 ? std::pair{1.0, 0.0} : std::pair{0.0, 1.0};
  const double k = db_to_linear(k_db);
  return {std::sqrt(k / (k + 1.0)), std::sqrt(1.0 / (k + 1.0))};
}

CMat assemble_cu_matrix(const CMat& h_bs_ris, const CVec& h_ris_cu, const CVec& h_bs_cu, double noise_std) {
  const Eigen::Index ns = h_bs_ris.rows();
  const Eigen::Index nb = h_bs_ris.cols();
  CMat g(ns + 1, nb);
  // Rows n < N_S: conj(h_S,n) * H_n,:  ; last row: h_B^H
  g.topRows(ns) = h_ris_cu.conjugate().asDiagonal() * h_bs_ris;
  g.row(ns) = h_bs_cu.adjoint();
  return g / noise_std;
}

ChannelSet sample_channels(const SystemConfig& config, const Geometry& geometry, std::uint64_t seed) {
  config.validate();
  const int nb = config.n_bs_antennas;
  const int ns = config.n_ris_elements;
  const int ny = upa_rows(ns);
  const int nz = ns / ny;
  const double spacing = config.element_spacing_wavelengths;
  const auto [w_los, w_nlos] = rician_weights(config.rician_k_db);
  ComplexGaussian gauss(seed);

  ChannelSet ch;
  ch.noise_comm_std = std::sqrt(config.noise_comm_w());
  ch.noise_sense_std = std::sqrt(config.noise_sense_w());
  ch.cu_regions = geometry.cu_regions;

  const Point2 bs = geometry.bs_position;
  const Point2 ris = geometry.ris_position;
  const Point2 normal_t = ris_normal(bs, ris);
  const Point2 normal_r{-normal_t.x, -normal_t.y};

  // BS -> RIS
  {
    const double d = distance(bs, ris);
    const double pl = pathloss(d, config.pathloss_exp_default, config.pathloss_ref);
    const double departure = std::atan2(ris.y - bs.y, ris.x - bs.x);
    const double arrival = angle_from(normal_r, bs.x - ris.x, bs.y - ris.y);
    const CMat los = planar_steering_vector(arrival, ny, nz, spacing) *
                     steering_vector(departure, nb, spacing).adjoint();
    ch.h_bs_ris = std::sqrt(pl) * (w_los * los + w_nlos * gauss.matrix(ns, nb));
  }

  for (std::size_t k = 0; k < geometry.cu_positions.size(); ++k) {
    const Point2 p = geometry.cu_positions[k];
    // BS -> CU direct link
    const double d_b = distance(bs, p);
    const double pl_b = pathloss(d_b, config.pathloss_exp_bs_cu, config.pathloss_ref);
    const CVec los_b = steering_vector(std::atan2(p.y - bs.y, p.x - bs.x), nb, spacing);
    ch.h_bs_cu.push_back(std::sqrt(pl_b) * (w_los * los_b + w_nlos * gauss.vector(nb)));

    // RIS -> CU
    const double d_s = distance(ris, p);
    const double pl_s = pathloss(d_s, config.pathloss_exp_default, config.pathloss_ref);
    const Point2& normal = geometry.cu_regions[k] == Region::transmission ? normal_t : normal_r;
    const CVec los_s = planar_steering_vector(angle_from(normal, p.x - ris.x, p.y - ris.y), ny, nz, spacing);
    ch.h_ris_cu.push_back(std::sqrt(pl_s) * (w_los * los_s + w_nlos * gauss.vector(ns)));
  }

  for (std::size_t j = 0; j < geometry.target_angles.size(); ++j) {
    const CVec a = steering_vector(geometry.target_angles[j], nb, spacing);
    const double pl = pathloss(geometry.target_distances[j], config.pathloss_exp_default, config.pathloss_ref);
    ch.steer_target.push_back(a);
    ch.h_bs_target.push_back(std::sqrt(pl) * a);
    ch.g_target.push_back(ch.h_bs_target.back() / ch.noise_sense_std);
  }

  for (std::size_t k = 0; k < ch.h_bs_cu.size(); ++k)
    ch.g_cu.push_back(assemble_cu_matrix(ch.h_bs_ris, ch.h_ris_cu[k], ch.h_bs_cu[k], ch.noise_comm_std));
  return ch;
}

const CVec& profile_for(const StarProfile& star, Region region) {
  return region == Region::transmission ? star.v_t : star.v_r;
}

CVec effective_cu_channel(const ChannelSet& channels, const StarProfile& star, int user) {
  const auto k = static_cast<std::size_t>(user);
  return channels.g_cu[k].adjoint() * profile_for(star, channels.cu_regions[k]);
}

namespace {

void write_matrix(std::ostream& out, const std::string& tag, const CMat& m) {
  out << tag << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out << m(r, c).real() << ' ' << m(r, c).imag() << '\n';
}

CMat read_matrix(std::istream& in, const std::string& expected_tag) {
  std::string tag;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != expected_tag)
    throw std::runtime_error("channel archive: expected block '" + expected_tag + "'");
  CMat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) throw std::runtime_error("channel archive: truncated block '" + expected_tag + "'");
      m(r, c) = {re, im};
    }
  return m;
}

}  // namespace

void save_channels(const ChannelSet& ch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write channel archive: " + path);
  out << std::setprecision(17);
  out << "secisac-channels " << kChannelArchiveVersion << '\n';
  out << "counts " << ch.n_bs() << ' ' << ch.n_elements() << ' ' << ch.n_users() << ' ' << ch.n_targets() << '\n';
  out << "noise " << ch.noise_comm_std << ' ' << ch.noise_sense_std << '\n';
  out << "regions";
  for (Region r : ch.cu_regions) out << ' ' << (r == Region::transmission ? 'T' : 'R');
  out << '\n';
  write_matrix(out, "h_bs_ris", ch.h_bs_ris);
  for (int k = 0; k < ch.n_users(); ++k) {
    write_matrix(out, "h_bs_cu", ch.h_bs_cu[k]);
    write_matrix(out, "h_ris_cu", ch.h_ris_cu[k]);
  }
  for (int j = 0; j < ch.n_targets(); ++j) {
    write_matrix(out, "h_bs_target", ch.h_bs_target[j]);
    write_matrix(out, "steer_target", ch.steer_target[j]);
  }
}

ChannelSet load_channels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel archive: " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "secisac-channels" || version != kChannelArchiveVersion)
    throw std::runtime_error("channel archive: unsupported header");
  std::string tag;
  int nb = 0, ns = 0, kc = 0, ks = 0;
  in >> tag >> nb >> ns >> kc >> ks;
  if (tag != "counts") throw std::runtime_error("channel archive: missing counts");
  ChannelSet ch;
  in >> tag >> ch.noise_comm_std >> ch.noise_sense_std;
  if (tag != "noise") throw std::runtime_error("channel archive: missing noise");
  in >> tag;
  if (tag != "regions") throw std::runtime_error("channel archive: missing regions");
  for (int k = 0; k < kc; ++k) {
    char r = 0;
    in >> r;
    ch.cu_regions.push_back(r == 'T' ? Region::transmission : Region::reflection);
  }
  ch.h_bs_ris = read_matrix(in, "h_bs_ris");
  if (ch.h_bs_ris.rows() != ns || ch.h_bs_ris.cols() != nb) throw std::runtime_error("channel archive: shape mismatch");
  for (int k = 0; k < kc; ++k) {
    ch.h_bs_cu.push_back(read_matrix(in, "h_bs_cu"));
    ch.h_ris_cu.push_back(read_matrix(in, "h_ris_cu"));
    ch.g_cu.push_back(assemble_cu_matrix(ch.h_bs_ris, ch.h_ris_cu.back(), ch.h_bs_cu.back(), ch.noise_comm_std));
  }
  for (int j = 0; j < ks; ++j) {
    ch.h_bs_target.push_back(read_matrix(in, "h_bs_target"));
    ch.steer_target.push_back(read_matrix(in, "steer_target"));
    ch.g_target.push_back(ch.h_bs_target.back() / ch.noise_sense_std);
  }
  return ch;
}

}  // namespace secisac
