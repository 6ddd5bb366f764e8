#include "secisac/config_io.hpp"

#include <fstream>
#include <stdexcept>

namespace secisac {

using nlohmann::json;

namespace {

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("config: positions are [x, y] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SystemConfig preset_config(const std::string& name) {
  if (name == "paper-default") return paper_default_config();
  if (name == "desk") return desk_config();
  throw std::invalid_argument("unknown config preset: " + name);
}

json config_to_json(const SystemConfig& c) {
  json geo;
  geo["bs_position"] = point_to_json(c.layout.bs_position);
  geo["ris_position"] = point_to_json(c.layout.ris_position);
  geo["cu_radius_m"] = c.layout.cu_radius_m;
  geo["cu_min_distance_m"] = c.layout.cu_min_distance_m;
  json angles = json::array();
  for (double a : c.layout.target_angles_rad) angles.push_back(rad_to_deg(a));
  geo["target_angles_deg"] = angles;
  geo["target_distances_m"] = c.layout.target_distances_m;

  json j;
  j["n_bs_antennas"] = c.n_bs_antennas;
  j["n_ris_elements"] = c.n_ris_elements;
  j["n_comm_users"] = c.n_comm_users;
  j["n_sense_targets"] = c.n_sense_targets;
  j["power_budget_dbm"] = c.power_budget_dbm;
  j["noise_comm_dbm"] = c.noise_comm_dbm;
  j["noise_sense_dbm"] = c.noise_sense_dbm;
  j["beampattern_ratio_db"] = c.beampattern_ratio_db;
  j["rician_k_db"] = c.rician_k_db;
  j["pathloss_ref"] = c.pathloss_ref;
  j["pathloss_exp_default"] = c.pathloss_exp_default;
  j["pathloss_exp_bs_cu"] = c.pathloss_exp_bs_cu;
  j["element_spacing_wavelengths"] = c.element_spacing_wavelengths;
  j["max_iters"] = c.max_iters;
  j["tol"] = c.tol;
  j["master_seed"] = c.master_seed;
  j["geometry"] = geo;
  return j;
}

SystemConfig config_from_json(const json& j) {
  SystemConfig c = preset_config(j.value("preset", std::string("paper-default")));

  const int old_targets = c.n_sense_targets;
  read_if(j, "n_sense_targets", c.n_sense_targets);
  if (c.n_sense_targets != old_targets) {
    const int n = c.n_sense_targets;
    resize_targets(c, n);
  }
  read_if(j, "n_bs_antennas", c.n_bs_antennas);
  read_if(j, "n_ris_elements", c.n_ris_elements);
  read_if(j, "n_comm_users", c.n_comm_users);
  read_if(j, "power_budget_dbm", c.power_budget_dbm);
  read_if(j, "noise_comm_dbm", c.noise_comm_dbm);
  read_if(j, "noise_sense_dbm", c.noise_sense_dbm);
  if (j.contains("beampattern_ratio_db")) {
    const json& eta = j.at("beampattern_ratio_db");
    if (eta.is_number())
      c.beampattern_ratio_db.assign(static_cast<std::size_t>(c.n_sense_targets), eta.get<double>());
    else
      c.beampattern_ratio_db = eta.get<std::vector<double>>();
  }
  read_if(j, "rician_k_db", c.rician_k_db);
  read_if(j, "pathloss_ref", c.pathloss_ref);
  read_if(j, "pathloss_exp_default", c.pathloss_exp_default);
  read_if(j, "pathloss_exp_bs_cu", c.pathloss_exp_bs_cu);
  read_if(j, "element_spacing_wavelengths", c.element_spacing_wavelengths);
  read_if(j, "max_iters", c.max_iters);
  read_if(j, "tol", c.tol);
  read_if(j, "master_seed", c.master_seed);

  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    if (g.contains("bs_position")) c.layout.bs_position = point_from_json(g.at("bs_position"));
    if (g.contains("ris_position")) c.layout.ris_position = point_from_json(g.at("ris_position"));
    read_if(g, "cu_radius_m", c.layout.cu_radius_m);
    read_if(g, "cu_min_distance_m", c.layout.cu_min_distance_m);
    if (g.contains("target_angles_deg")) {
      c.layout.target_angles_rad.clear();
      for (double deg : g.at("target_angles_deg").get<std::vector<double>>())
        c.layout.target_angles_rad.push_back(deg_to_rad(deg));
    }
    read_if(g, "target_distances_m", c.layout.target_distances_m);
  }
  c.validate();
  return c;
}

SystemConfig load_config(const std::string& name_or_path) {
  if (name_or_path == "paper-default" || name_or_path == "desk") return preset_config(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw std::runtime_error("cannot open config file: " + name_or_path);
  json j;
  in >> j;
  return config_from_json(j);
}

void save_config(const SystemConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace secisac
