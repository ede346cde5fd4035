#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranlab/hash.hpp"
#include "ranlab/network_eval.hpp"
#include "ranlab/tilt_features.hpp"
#include "ranlab/tilt_policy.hpp"
#include "ranlab/tilt_reward.hpp"

namespace ranlab {

// One logged (state, action, reward, propensity) tuple of the daily loop.
struct Transition {
  int cell_id = 0;
  std::vector<double> features;
  int action = 0;
  double reward = 0.0;
  double propensity = 1.0;
  int day = 0;
};

struct ExperienceLog {
  std::vector<Transition> transitions;
  std::string env_config_hash;
  std::uint64_t seed = 0;
  int feature_count = 35;
};

// Environment-side knobs of the daily tilt loop, shared by log generation
// and policy evaluation so both see identical dynamics.
struct TiltSimConfig {
  int n_users = 2000;
  int feature_count = 35;
  double sinr_threshold_db = -6.0;
  double tilt_min_deg = 0.0;
  double tilt_max_deg = 16.0;
  double tilt_step_deg = 1.0;
  double epsilon = 0.3;       // exploration rate of the logging policy
  double beta = 0.5;          // coverage vs capacity weight inside g()
  double mu = 0.5;            // own vs neighbor weight
  double cap_norm = 5.0;
  RuleThresholds thresholds;
  FeatureScaling scaling;
};

inline void validate_sim(const TiltSimConfig& sim) {
  if (sim.n_users < 1) throw std::invalid_argument("tilt sim: n_users < 1");
  if (!(sim.epsilon > 0.0 && sim.epsilon <= 1.0)) {
    throw std::invalid_argument("tilt sim: epsilon outside (0,1]");
  }
  if (!(sim.tilt_min_deg < sim.tilt_max_deg)) {
    throw std::invalid_argument("tilt sim: tilt bounds inverted");
  }
  if (!(sim.tilt_step_deg > 0.0)) {
    throw std::invalid_argument("tilt sim: tilt_step_deg <= 0");
  }
  validate_thresholds(sim.thresholds);
}

inline double apply_tilt_action(double tilt, TiltAction a,
                                const TiltSimConfig& sim) {
  switch (a) {
    case TiltAction::uptilt: tilt -= sim.tilt_step_deg; break;
    case TiltAction::downtilt: tilt += sim.tilt_step_deg; break;
    case TiltAction::nochange: break;
  }
  return std::clamp(tilt, sim.tilt_min_deg, sim.tilt_max_deg);
}

inline nlohmann::json tilt_env_json(const NetworkLayout& layout,
                                    const PropagationParams& params,
                                    const TiltSimConfig& sim) {
  nlohmann::json j;
  j["n_rings"] = layout.n_rings;
  j["isd_m"] = layout.inter_site_distance;
  j["n_cells"] = layout.cell_count();
  j["pl_intercept_db"] = params.pl_intercept_db;
  j["pl_slope"] = params.pl_slope;
  j["hpbw_v_deg"] = params.hpbw_v_deg;
  j["sla_v_db"] = params.sla_v_db;
  j["hpbw_h_deg"] = params.hpbw_h_deg;
  j["max_horiz_atten_db"] = params.max_horiz_atten_db;
  j["noise_dbm"] = params.noise_dbm;
  j["ue_height_m"] = params.ue_height_m;
  j["n_users"] = sim.n_users;
  j["sinr_threshold_db"] = sim.sinr_threshold_db;
  j["tilt_min_deg"] = sim.tilt_min_deg;
  j["tilt_max_deg"] = sim.tilt_max_deg;
  j["tilt_step_deg"] = sim.tilt_step_deg;
  j["epsilon"] = sim.epsilon;
  j["beta"] = sim.beta;
  j["mu"] = sim.mu;
  j["cap_norm"] = sim.cap_norm;
  return j;
}

// Runs the epsilon-mixed rule policy for n_days and logs one transition per
// cell per day pair: features observed on day d, the action taken, and the
// reward realized on day d+1 under a fresh user drop.
inline ExperienceLog generate_log(const NetworkLayout& initial_layout,
                                  const PropagationParams& params,
                                  const TiltSimConfig& sim, int n_days,
                                  std::uint64_t seed) {
  if (n_days < 2) throw std::invalid_argument("generate_log: n_days < 2");
  validate_sim(sim);

  ExperienceLog log;
  log.seed = seed;
  log.feature_count = sim.feature_count;
  log.env_config_hash = config_hash(tilt_env_json(initial_layout, params, sim));

  NetworkLayout layout = initial_layout;
  Rng root(seed);
  Rng action_rng = root.child("actions");

  auto eval = evaluate_network(layout, params, sim.n_users,
                               root.child("drop").child(0).seed(),
                               sim.sinr_threshold_db);
  for (int day = 0; day + 1 < n_days; ++day) {
    std::vector<Transition> today;
    today.reserve(layout.cell_count());
    for (int c = 0; c < layout.cell_count(); ++c) {
      Transition t;
      t.cell_id = c;
      t.day = day;
      t.features = build_features(eval.kpis, c, layout, sim.feature_count,
                                  sim.scaling);
      const auto sample = rule_based_action(eval.kpis[c], sim.thresholds,
                                            sim.epsilon, action_rng);
      t.action = static_cast<int>(sample.action);
      t.propensity = sample.propensity;
      today.push_back(std::move(t));
      layout.cells[c].tilt_deg =
          apply_tilt_action(layout.cells[c].tilt_deg, sample.action, sim);
    }
    eval = evaluate_network(layout, params, sim.n_users,
                            root.child("drop").child(day + 1).seed(),
                            sim.sinr_threshold_db);
    for (auto& t : today) {
      t.reward = tilt_reward(eval.kpis, t.cell_id, layout, sim.beta, sim.mu,
                             sim.cap_norm);
      log.transitions.push_back(std::move(t));
    }
  }
  return log;
}

// JSON Lines: one header object, then one object per transition.
inline void write_log_jsonl(const ExperienceLog& log, std::ostream& os) {
  nlohmann::json header;
  header["env_config_hash"] = log.env_config_hash;
  header["seed"] = log.seed;
  header["feature_count"] = log.feature_count;
  os << header.dump() << "\n";
  for (const auto& t : log.transitions) {
    nlohmann::json j;
    j["day"] = t.day;
    j["cell_id"] = t.cell_id;
    j["features"] = t.features;
    j["action"] = t.action;
    j["reward"] = t.reward;
    j["propensity"] = t.propensity;
    os << j.dump() << "\n";
  }
}

inline void write_log_jsonl(const ExperienceLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open log file for write: " + path);
  write_log_jsonl(log, f);
}

inline ExperienceLog read_log_jsonl(std::istream& is) {
  ExperienceLog log;
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("experience log: missing header line");
  }
  auto header = nlohmann::json::parse(line);
  log.env_config_hash = header.at("env_config_hash").get<std::string>();
  log.seed = header.at("seed").get<std::uint64_t>();
  log.feature_count = header.at("feature_count").get<int>();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    Transition t;
    t.day = j.at("day").get<int>();
    t.cell_id = j.at("cell_id").get<int>();
    t.features = j.at("features").get<std::vector<double>>();
    t.action = j.at("action").get<int>();
    t.reward = j.at("reward").get<double>();
    t.propensity = j.at("propensity").get<double>();
    log.transitions.push_back(std::move(t));
  }
  return log;
}

inline ExperienceLog read_log_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open log file for read: " + path);
  return read_log_jsonl(f);
}

}  // namespace ranlab
