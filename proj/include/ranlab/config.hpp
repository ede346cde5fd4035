#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ranlab {

// Configuration problems carry the dotted path of the offending key and
// map to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline nlohmann::json default_config() {
  using json = nlohmann::json;
  json j;
  j["experiment"] = "";
  j["seeds"] = {1, 2, 3, 4, 5};
  j["output_dir"] = "out";

  json env;
  env["n_rings"] = 1;
  env["isd_m"] = 2000.0;
  env["n_users"] = 2000;
  env["bs_height_m"] = 25.0;
  env["ue_height_m"] = 1.5;
  env["tx_power_dbm"] = 46.0;
  env["noise_dbm"] = -104.0;
  env["pl_intercept_db"] = 128.1;
  env["pl_slope"] = 37.6;
  env["hpbw_v_deg"] = 10.0;
  env["sla_v_db"] = 20.0;
  env["hpbw_h_deg"] = 65.0;
  env["max_horiz_atten_db"] = 25.0;
  env["sinr_threshold_db"] = -6.0;

  json tilt;
  tilt["env"] = env;
  tilt["initial_tilt_deg"] = 13.0;
  tilt["tilt_jitter_deg"] = 3.0;
  tilt["tilt_min_deg"] = 0.0;
  tilt["tilt_max_deg"] = 16.0;
  tilt["tilt_step_deg"] = 1.0;
  tilt["rule"] = {{"cov_low", 0.95}, {"cov_high", 0.985}, {"cap_low", 3.0}};
  tilt["epsilon"] = 0.3;
  tilt["log_days"] = 200;
  tilt["reward"] = {{"beta", 0.5}, {"mu", 0.5}, {"cap_norm", 5.0}};
  tilt["scaling"] = {{"coverage", {0.5, 0.5}},
                     {"capacity", {2.5, 2.5}},
                     {"mean_sinr", {10.0, 10.0}},
                     {"edge_sinr", {0.0, 10.0}},
                     {"load", {100.0, 100.0}}};
  tilt["train"] = {{"epochs", 60},
                   {"batch_size", 64},
                   {"lr", 1e-3},
                   {"weight_cap", 20.0},
                   {"hidden", {64, 64}}};
  tilt["feature_counts"] = {5, 20, 35};
  tilt["schemes"] = {"dm", "pdm"};
  tilt["eval"] = {{"days", 12}, {"n_seeds", 5}, {"base_seed", 900}};
  j["tilt"] = tilt;

  json beam;
  beam["m_antennas"] = 2;
  beam["snr_db"] = 10.0;
  beam["channel_seed"] = 1;
  beam["alphas"] = {0.0, 0.25, 0.5, 0.75, 1.0};
  beam["pae_modes"] = {"on", "off"};
  beam["oracle_grid_n"] = 257;
  beam["train"] = {{"steps", 3000},
                   {"warmup_steps", 100},
                   {"batch_size", 64},
                   {"critic_updates_per_step", 2},
                   {"actor_lr", 3e-4},
                   {"critic_lr", 1e-3},
                   {"sigma_start", 0.1},
                   {"sigma_end", 0.01},
                   {"actor_hidden", {64, 64}},
                   {"critic_hidden", {64, 64}},
                   {"trace_every", 50},
                   {"eval_draws", 64}};
  j["beam"] = beam;

  json csi;
  csi["dataset"] = {{"n", 4096}, {"n_tx", 32}, {"n_paths", 3},
                    {"angle_spread_deg", 60.0}};
  csi["latent_dims"] = {4, 8, 16};
  csi["bits"] = 4;
  csi["baseline_latent_dim"] = 8;
  csi["emit_feedback_samples"] = 16;
  csi["train"] = {{"epochs", 60},   {"batch_size", 64},
                  {"lr", 1e-3},     {"enc_hidden", {128}},
                  {"dec_hidden", {128}}, {"quant_range", 4.0},
                  {"val_fraction", 0.1}};
  j["csi"] = csi;
  return j;
}

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Merge user values over the defaults; any key absent from the defaults is
// unknown and rejected with its dotted path.
inline void merge_into(nlohmann::json& base, const nlohmann::json& user,
                       const std::string& path,
                       std::vector<std::string>* defaulted) {
  if (!user.is_object() || !base.is_object()) {
    throw ConfigError("config: expected object at " +
                      (path.empty() ? std::string("<root>") : path));
  }
  for (const auto& [key, value] : user.items()) {
    const std::string p = join_path(path, key);
    if (!base.contains(key)) {
      throw ConfigError("config: unknown key " + p);
    }
    if (base[key].is_object() && value.is_object()) {
      merge_into(base[key], value, p, defaulted);
    } else if (base[key].is_object() != value.is_object()) {
      throw ConfigError("config: type mismatch at " + p);
    } else {
      if (base[key].is_number() && !value.is_number()) {
        throw ConfigError("config: expected number at " + p);
      }
      if (base[key].is_array() && !value.is_array()) {
        throw ConfigError("config: expected array at " + p);
      }
      if (base[key].is_string() && !value.is_string()) {
        throw ConfigError("config: expected string at " + p);
      }
      base[key] = value;
    }
  }
  if (defaulted) {
    for (const auto& [key, value] : base.items()) {
      if (!user.contains(key)) {
        if (value.is_object()) {
          // Whole subtree defaulted: list its leaves.
          nlohmann::json empty = nlohmann::json::object();
          merge_into(base[key], empty, join_path(path, key), defaulted);
        } else {
          defaulted->push_back(join_path(path, key));
        }
      } else if (value.is_object()) {
        // handled in recursion above
      }
    }
  }
}

inline double num(const nlohmann::json& j) { return j.get<double>(); }

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError("config: " + path + " " + what);
}

}  // namespace detail

inline void check_bounds(const nlohmann::json& c) {
  using detail::num;
  using detail::require;
  const std::string exp = c.at("experiment").get<std::string>();
  require(exp == "tilt" || exp == "beam" || exp == "csi", "experiment",
          "must be one of tilt|beam|csi");
  require(c.at("seeds").is_array() && !c.at("seeds").empty(), "seeds",
          "must be a nonempty array");
  for (std::size_t i = 0; i < c.at("seeds").size(); ++i) {
    require(c.at("seeds")[i].is_number_integer(),
            "seeds[" + std::to_string(i) + "]", "must be an integer");
  }

  const auto& t = c.at("tilt");
  const auto& env = t.at("env");
  require(env.at("n_rings").get<int>() >= 0, "tilt.env.n_rings", "must be >= 0");
  require(num(env.at("isd_m")) > 0, "tilt.env.isd_m", "must be > 0");
  require(env.at("n_users").get<int>() >= 1, "tilt.env.n_users", "must be >= 1");
  require(num(env.at("hpbw_v_deg")) > 0 && num(env.at("hpbw_v_deg")) <= 90,
          "tilt.env.hpbw_v_deg", "must be in (0, 90]");
  require(num(env.at("hpbw_h_deg")) > 0 && num(env.at("hpbw_h_deg")) <= 90,
          "tilt.env.hpbw_h_deg", "must be in (0, 90]");
  require(num(env.at("sla_v_db")) > 0, "tilt.env.sla_v_db", "must be > 0");
  require(num(env.at("max_horiz_atten_db")) > 0, "tilt.env.max_horiz_atten_db",
          "must be > 0");
  require(num(env.at("pl_slope")) > 0, "tilt.env.pl_slope", "must be > 0");
  require(num(t.at("tilt_min_deg")) < num(t.at("tilt_max_deg")),
          "tilt.tilt_min_deg", "must be below tilt_max_deg");
  require(num(t.at("tilt_step_deg")) > 0, "tilt.tilt_step_deg", "must be > 0");
  require(num(t.at("tilt_jitter_deg")) >= 0, "tilt.tilt_jitter_deg",
          "must be >= 0");
  const double eps = num(t.at("epsilon"));
  require(eps > 0 && eps <= 1, "tilt.epsilon", "must be in (0, 1]");
  require(t.at("log_days").get<int>() >= 2, "tilt.log_days", "must be >= 2");
  require(num(t.at("rule").at("cov_low")) < num(t.at("rule").at("cov_high")),
          "tilt.rule.cov_low", "must be below rule.cov_high");
  const double beta = num(t.at("reward").at("beta"));
  const double mu = num(t.at("reward").at("mu"));
  require(beta >= 0 && beta <= 1, "tilt.reward.beta", "must be in [0, 1]");
  require(mu >= 0 && mu <= 1, "tilt.reward.mu", "must be in [0, 1]");
  require(num(t.at("reward").at("cap_norm")) > 0, "tilt.reward.cap_norm",
          "must be > 0");
  for (const auto& [kpi, pair] : t.at("scaling").items()) {
    require(pair.is_array() && pair.size() == 2, "tilt.scaling." + kpi,
            "must be [offset, scale]");
    require(num(pair[1]) != 0.0, "tilt.scaling." + kpi,
            "scale must be nonzero");
  }
  require(t.at("train").at("epochs").get<int>() >= 1, "tilt.train.epochs",
          "must be >= 1");
  require(t.at("train").at("batch_size").get<int>() >= 1,
          "tilt.train.batch_size", "must be >= 1");
  require(num(t.at("train").at("lr")) > 0, "tilt.train.lr", "must be > 0");
  require(num(t.at("train").at("weight_cap")) >= 1, "tilt.train.weight_cap",
          "must be >= 1");
  require(!t.at("feature_counts").empty(), "tilt.feature_counts",
          "must be nonempty");
  for (std::size_t i = 0; i < t.at("feature_counts").size(); ++i) {
    const int fc = t.at("feature_counts")[i].get<int>();
    require(fc == 5 || fc == 20 || fc == 35,
            "tilt.feature_counts[" + std::to_string(i) + "]",
            "must be one of 5|20|35");
  }
  require(!t.at("schemes").empty(), "tilt.schemes", "must be nonempty");
  for (std::size_t i = 0; i < t.at("schemes").size(); ++i) {
    const std::string s = t.at("schemes")[i].get<std::string>();
    require(s == "dm" || s == "pdm", "tilt.schemes[" + std::to_string(i) + "]",
            "must be dm or pdm");
  }
  require(t.at("eval").at("days").get<int>() >= 2, "tilt.eval.days",
          "must be >= 2");
  require(t.at("eval").at("n_seeds").get<int>() >= 1, "tilt.eval.n_seeds",
          "must be >= 1");

  const auto& b = c.at("beam");
  require(b.at("m_antennas").get<int>() >= 2, "beam.m_antennas", "must be >= 2");
  require(!b.at("alphas").empty(), "beam.alphas", "must be nonempty");
  for (std::size_t i = 0; i < b.at("alphas").size(); ++i) {
    const double a = num(b.at("alphas")[i]);
    require(a >= 0.0 && a <= 1.0, "beam.alphas[" + std::to_string(i) + "]",
            "must be in [0, 1]");
  }
  require(!b.at("pae_modes").empty(), "beam.pae_modes", "must be nonempty");
  for (std::size_t i = 0; i < b.at("pae_modes").size(); ++i) {
    const std::string m = b.at("pae_modes")[i].get<std::string>();
    require(m == "on" || m == "off", "beam.pae_modes[" + std::to_string(i) + "]",
            "must be on or off");
  }
  require(b.at("oracle_grid_n").get<int>() >= 2, "beam.oracle_grid_n",
          "must be >= 2");
  const auto& bt = b.at("train");
  require(bt.at("steps").get<int>() >= 1, "beam.train.steps", "must be >= 1");
  require(bt.at("batch_size").get<int>() >= 1, "beam.train.batch_size",
          "must be >= 1");
  require(num(bt.at("actor_lr")) > 0, "beam.train.actor_lr", "must be > 0");
  require(num(bt.at("critic_lr")) > 0, "beam.train.critic_lr", "must be > 0");
  require(num(bt.at("sigma_start")) >= 0, "beam.train.sigma_start",
          "must be >= 0");
  require(num(bt.at("sigma_end")) >= 0, "beam.train.sigma_end", "must be >= 0");
  require(bt.at("trace_every").get<int>() >= 1, "beam.train.trace_every",
          "must be >= 1");
  require(bt.at("eval_draws").get<int>() >= 1, "beam.train.eval_draws",
          "must be >= 1");

  const auto& s = c.at("csi");
  const auto& ds = s.at("dataset");
  require(ds.at("n").get<int>() >= 32, "csi.dataset.n", "must be >= 32");
  require(ds.at("n_tx").get<int>() >= 1, "csi.dataset.n_tx", "must be >= 1");
  require(ds.at("n_paths").get<int>() >= 1, "csi.dataset.n_paths",
          "must be >= 1");
  const double spread = num(ds.at("angle_spread_deg"));
  require(spread > 0 && spread <= 90, "csi.dataset.angle_spread_deg",
          "must be in (0, 90]");
  const int n_tx = ds.at("n_tx").get<int>();
  require(!s.at("latent_dims").empty(), "csi.latent_dims", "must be nonempty");
  for (std::size_t i = 0; i < s.at("latent_dims").size(); ++i) {
    const int L = s.at("latent_dims")[i].get<int>();
    require(L >= 1 && L <= 2 * n_tx, "csi.latent_dims[" + std::to_string(i) + "]",
            "must be in [1, 2*n_tx]");
  }
  const int bits = s.at("bits").get<int>();
  require(bits >= 1 && bits <= 16, "csi.bits", "must be in [1, 16]");
  const int bl = s.at("baseline_latent_dim").get<int>();
  require(bl >= 0 && bl <= 2 * n_tx, "csi.baseline_latent_dim",
          "must be in [0, 2*n_tx]");
  require(s.at("emit_feedback_samples").get<int>() >= 0,
          "csi.emit_feedback_samples", "must be >= 0");
  const auto& st = s.at("train");
  require(st.at("epochs").get<int>() >= 1, "csi.train.epochs", "must be >= 1");
  require(st.at("batch_size").get<int>() >= 1, "csi.train.batch_size",
          "must be >= 1");
  require(num(st.at("lr")) > 0, "csi.train.lr", "must be > 0");
  require(num(st.at("quant_range")) > 0, "csi.train.quant_range",
          "must be > 0");
  const double vf = num(st.at("val_fraction"));
  require(vf > 0 && vf < 1, "csi.train.val_fraction", "must be in (0, 1)");
}

struct ValidatedConfig {
  nlohmann::json config;
  std::vector<std::string> defaulted;
};

// Value at a dotted path, serialized; for the validate report.
inline std::string value_at_path(const nlohmann::json& c,
                                 const std::string& path) {
  const nlohmann::json* node = &c;
  std::string cur;
  for (char ch : path + ".") {
    if (ch == '.') {
      if (!node->is_object() || !node->contains(cur)) return "?";
      node = &(*node)[cur];
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return node->dump();
}

inline ValidatedConfig validate_config(const nlohmann::json& user) {
  ValidatedConfig out;
  out.config = default_config();
  if (!user.contains("experiment")) {
    throw ConfigError("config: missing required key experiment");
  }
  detail::merge_into(out.config, user, "", &out.defaulted);
  check_bounds(out.config);
  return out;
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return j;
}

// Applies one `dotted.path=value` override to the raw (pre-merge) user
// config. The path must exist in the schema; the value parses as JSON when
// possible and falls back to a plain string.
inline void apply_override(nlohmann::json& user, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("config: override must look like key.path=value: " + kv);
  }
  const std::string path = kv.substr(0, eq);
  const std::string value_text = kv.substr(eq + 1);

  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      if (cur.empty()) throw ConfigError("config: bad override path " + path);
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (cur.empty()) throw ConfigError("config: bad override path " + path);
  parts.push_back(cur);

  // The schema must already know this key.
  const nlohmann::json schema = default_config();
  const nlohmann::json* node = &schema;
  for (const auto& part : parts) {
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("config: override references unknown key " + path);
    }
    node = &(*node)[part];
  }
  if (node->is_object()) {
    throw ConfigError("config: override path " + path +
                      " names an object, not a value");
  }

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(value_text);
  } catch (const nlohmann::json::parse_error&) {
    value = value_text;
  }

  nlohmann::json* dst = &user;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!dst->contains(parts[i]) || !(*dst)[parts[i]].is_object()) {
      (*dst)[parts[i]] = nlohmann::json::object();
    }
    dst = &(*dst)[parts[i]];
  }
  (*dst)[parts.back()] = value;
}

}  // namespace ranlab
