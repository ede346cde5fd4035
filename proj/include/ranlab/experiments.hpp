#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranlab/beam_ctde.hpp"
#include "ranlab/config.hpp"
#include "ranlab/csi_autoencoder.hpp"
#include "ranlab/csi_baseline.hpp"
#include "ranlab/csi_channel.hpp"
#include "ranlab/csv.hpp"
#include "ranlab/hash.hpp"
#include "ranlab/pool.hpp"
#include "ranlab/svg.hpp"
#include "ranlab/tilt_eval.hpp"
#include "ranlab/tilt_train.hpp"
#include "ranlab/version.hpp"

namespace ranlab {

struct RunResult {
  nlohmann::json manifest;
  std::vector<std::string> output_files;  // relative to output_dir
};

namespace detail {

inline std::uint64_t seed_at(const nlohmann::json& c, std::size_t i) {
  return c.at("seeds")[i].get<std::uint64_t>();
}

// ---- tilt experiment -----------------------------------------------------

inline TiltSimConfig tilt_sim_from_config(const nlohmann::json& t,
                                          int feature_count) {
  const auto& env = t.at("env");
  const auto& rule = t.at("rule");
  const auto& reward = t.at("reward");
  const auto& sc = t.at("scaling");
  TiltSimConfig sim;
  sim.n_users = env.at("n_users").get<int>();
  sim.feature_count = feature_count;
  sim.sinr_threshold_db = env.at("sinr_threshold_db").get<double>();
  sim.tilt_min_deg = t.at("tilt_min_deg").get<double>();
  sim.tilt_max_deg = t.at("tilt_max_deg").get<double>();
  sim.tilt_step_deg = t.at("tilt_step_deg").get<double>();
  sim.epsilon = t.at("epsilon").get<double>();
  sim.beta = reward.at("beta").get<double>();
  sim.mu = reward.at("mu").get<double>();
  sim.cap_norm = reward.at("cap_norm").get<double>();
  sim.thresholds = {rule.at("cov_low").get<double>(),
                    rule.at("cov_high").get<double>(),
                    rule.at("cap_low").get<double>()};
  auto pair = [&](const char* key) {
    return std::array<double, 2>{sc.at(key)[0].get<double>(),
                                 sc.at(key)[1].get<double>()};
  };
  sim.scaling.coverage = pair("coverage");
  sim.scaling.capacity = pair("capacity");
  sim.scaling.mean_sinr = pair("mean_sinr");
  sim.scaling.edge_sinr = pair("edge_sinr");
  sim.scaling.load = pair("load");
  return sim;
}

inline PropagationParams propagation_from_config(const nlohmann::json& env) {
  PropagationParams p;
  p.pl_intercept_db = env.at("pl_intercept_db").get<double>();
  p.pl_slope = env.at("pl_slope").get<double>();
  p.hpbw_v_deg = env.at("hpbw_v_deg").get<double>();
  p.sla_v_db = env.at("sla_v_db").get<double>();
  p.hpbw_h_deg = env.at("hpbw_h_deg").get<double>();
  p.max_horiz_atten_db = env.at("max_horiz_atten_db").get<double>();
  p.noise_dbm = env.at("noise_dbm").get<double>();
  p.ue_height_m = env.at("ue_height_m").get<double>();
  return p;
}

struct TiltSeedOutcome {
  // keyed by (scheme, feature_count)
  std::map<std::pair<std::string, int>, PolicyEvalResult> evals;
  std::vector<std::pair<int, ExperienceLog>> logs;  // per feature count
};

inline TiltSeedOutcome run_tilt_seed(const nlohmann::json& t,
                                     std::uint64_t seed) {
  const auto& env = t.at("env");
  PropagationParams params = propagation_from_config(env);
  LayoutOptions opt;
  opt.initial_tilt_deg = t.at("initial_tilt_deg").get<double>();
  opt.tilt_jitter_deg = t.at("tilt_jitter_deg").get<double>();
  auto layout = build_layout(env.at("n_rings").get<int>(),
                             env.at("isd_m").get<double>(), seed, opt);

  TrainConfig base_train;
  base_train.epochs = t.at("train").at("epochs").get<int>();
  base_train.batch_size = t.at("train").at("batch_size").get<int>();
  base_train.lr = t.at("train").at("lr").get<double>();
  base_train.weight_cap = t.at("train").at("weight_cap").get<double>();
  base_train.hidden_sizes =
      t.at("train").at("hidden").get<std::vector<int>>();

  const int log_days = t.at("log_days").get<int>();
  const int eval_days = t.at("eval").at("days").get<int>();
  const int eval_seeds = t.at("eval").at("n_seeds").get<int>();
  const std::uint64_t eval_base =
      t.at("eval").at("base_seed").get<std::uint64_t>() + seed;

  TiltSeedOutcome out;
  TiltSimConfig sim0 = tilt_sim_from_config(t, 35);
  TiltPolicy rule;
  rule.kind = PolicyKind::rule_based;
  rule.thresholds = sim0.thresholds;
  out.evals[{"rule", 0}] = evaluate_policy(layout, params, sim0, rule,
                                           eval_days, eval_seeds, eval_base);

  for (const auto& fc_json : t.at("feature_counts")) {
    const int fc = fc_json.get<int>();
    TiltSimConfig sim = tilt_sim_from_config(t, fc);
    auto log = generate_log(layout, params, sim, log_days, seed);
    TrainConfig cfg = base_train;
    cfg.feature_count = fc;
    for (const auto& scheme_json : t.at("schemes")) {
      const std::string scheme = scheme_json.get<std::string>();
      DenseNet qnet = scheme == "dm" ? train_dm(log, cfg, seed)
                                     : train_propensity_dm(log, cfg, seed);
      TiltPolicy pol;
      pol.kind = PolicyKind::greedy_q;
      pol.qnet = std::move(qnet);
      pol.feature_count = fc;
      out.evals[{scheme, fc}] = evaluate_policy(layout, params, sim, pol,
                                                eval_days, eval_seeds,
                                                eval_base);
    }
    out.logs.emplace_back(fc, std::move(log));
  }
  return out;
}

inline void run_tilt(const nlohmann::json& c,
                     const std::filesystem::path& outdir, int jobs,
                     std::vector<std::string>& files) {
  const auto& t = c.at("tilt");
  const std::size_t n_seeds = c.at("seeds").size();
  std::vector<TiltSeedOutcome> outcomes(n_seeds);
  run_indexed(static_cast<int>(n_seeds), jobs, [&](int i) {
    outcomes[i] = run_tilt_seed(t, seed_at(c, i));
  });

  std::map<std::pair<std::string, int>, double> mean_reward;
  std::map<std::pair<std::string, int>, double> mean_gain;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    const std::uint64_t seed = seed_at(c, i);
    CsvWriter csv({"scheme", "feature_count", "mean_reward",
                   "baseline_mean_reward", "gain_pct"});
    for (const auto& [key, eval] : outcomes[i].evals) {
      csv.row()
          .add(key.first)
          .add(key.second)
          .add(eval.mean_reward)
          .add(eval.baseline_mean_reward)
          .add(eval.gain_pct);
      mean_reward[key] += eval.mean_reward / n_seeds;
      mean_gain[key] += eval.gain_pct / n_seeds;
    }
    const std::string name = "tilt_seed" + std::to_string(seed) + ".csv";
    csv.save((outdir / name).string());
    files.push_back(name);
    for (const auto& [fc, log] : outcomes[i].logs) {
      const std::string log_name = "experience_seed" + std::to_string(seed) +
                                   "_f" + std::to_string(fc) + ".jsonl";
      write_log_jsonl(log, (outdir / log_name).string());
      files.push_back(log_name);
    }
  }

  CsvWriter agg({"scheme", "feature_count", "mean_reward", "mean_gain_pct"});
  for (const auto& [key, reward] : mean_reward) {
    agg.row().add(key.first).add(key.second).add(reward).add(mean_gain[key]);
  }
  agg.save((outdir / "tilt_aggregate.csv").string());
  files.push_back("tilt_aggregate.csv");

  // Grouped bars of gain% per scheme and feature count.
  SvgPlot plot(640, 420, "Offline RL gain over rule-based tilt policy");
  double lo = 0.0, hi = 0.0;
  for (const auto& [key, gain] : mean_gain) {
    lo = std::min(lo, gain);
    hi = std::max(hi, gain);
  }
  plot.set_range(0.0, 7.0, lo - 1.0, hi + 1.0);
  plot.set_labels("scheme / feature count", "gain %");
  const std::map<std::string, std::string> colors = {{"dm", "#4472c4"},
                                                     {"pdm", "#ed7d31"}};
  double x = 1.0;
  for (const auto& [key, gain] : mean_gain) {
    if (key.first == "rule") continue;
    plot.bar(x, 40.0, gain, colors.at(key.first));
    plot.text(x, lo - 0.6,
              key.first + "-" + std::to_string(key.second), 10);
    x += 1.0;
  }
  plot.legend({{"direct method", "#4472c4"}, {"propensity-DM", "#ed7d31"}});
  plot.save((outdir / "tilt_gains.svg").string());
  files.push_back("tilt_gains.svg");
}

// ---- beamforming experiment ------------------------------------------------

inline void run_beam(const nlohmann::json& c,
                     const std::filesystem::path& outdir, int jobs,
                     std::vector<std::string>& files) {
  const auto& b = c.at("beam");
  const auto& bt = b.at("train");
  Rng channel_rng =
      Rng(b.at("channel_seed").get<std::uint64_t>()).child("channel");
  const MisoChannel ch = sample_channel(b.at("m_antennas").get<int>(),
                                        b.at("snr_db").get<double>(),
                                        channel_rng);

  const auto boundary = pareto_oracle(ch, b.at("oracle_grid_n").get<int>());
  {
    CsvWriter csv({"lambda1", "lambda2", "r1", "r2"});
    for (const auto& p : boundary) {
      csv.row().add(p.lambda1).add(p.lambda2).add(p.rates.r1).add(p.rates.r2);
    }
    csv.save((outdir / "beam_boundary.csv").string());
    files.push_back("beam_boundary.csv");
  }

  CtdeConfig base;
  base.steps = bt.at("steps").get<int>();
  base.warmup_steps = bt.at("warmup_steps").get<int>();
  base.batch_size = bt.at("batch_size").get<int>();
  base.critic_updates_per_step = bt.at("critic_updates_per_step").get<int>();
  base.actor_lr = bt.at("actor_lr").get<double>();
  base.critic_lr = bt.at("critic_lr").get<double>();
  base.sigma_start = bt.at("sigma_start").get<double>();
  base.sigma_end = bt.at("sigma_end").get<double>();
  base.actor_hidden = bt.at("actor_hidden").get<std::vector<int>>();
  base.critic_hidden = bt.at("critic_hidden").get<std::vector<int>>();
  base.trace_every = bt.at("trace_every").get<int>();
  base.eval_draws = bt.at("eval_draws").get<int>();

  const auto alphas = b.at("alphas").get<std::vector<double>>();
  std::vector<bool> pae_flags;
  for (const auto& m : b.at("pae_modes")) {
    pae_flags.push_back(m.get<std::string>() == "on");
  }

  struct Task {
    std::uint64_t seed = 0;
    double alpha = 0.0;
    bool pae = true;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < c.at("seeds").size(); ++i) {
    for (bool pae : pae_flags) {
      for (double a : alphas) {
        tasks.push_back({seed_at(c, i), a, pae});
      }
    }
  }
  std::vector<CtdeResult> results(tasks.size());
  run_indexed(static_cast<int>(tasks.size()), jobs, [&](int i) {
    CtdeConfig cfg = base;
    cfg.alpha = tasks[i].alpha;
    cfg.use_pae = tasks[i].pae;
    cfg.randomize_phases = true;
    cfg.seed = tasks[i].seed;
    results[i] = train_ctde(ch, cfg);
  });

  CsvWriter trace_csv({"alpha", "step", "r1", "r2", "pae_flag", "seed"});
  CsvWriter final_csv(
      {"alpha", "pae_flag", "seed", "r1", "r2", "weighted_sum"});
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    const auto& res = results[i];
    for (const auto& tp : res.trace) {
      trace_csv.row()
          .add(task.alpha)
          .add(tp.step)
          .add(tp.greedy_rates.r1)
          .add(tp.greedy_rates.r2)
          .add(task.pae ? 1 : 0)
          .add(task.seed);
    }
    final_csv.row()
        .add(task.alpha)
        .add(task.pae ? 1 : 0)
        .add(task.seed)
        .add(res.final_rates.r1)
        .add(res.final_rates.r2)
        .add(res.final_weighted);
  }
  trace_csv.save((outdir / "beam_trace.csv").string());
  files.push_back("beam_trace.csv");
  final_csv.save((outdir / "beam_final.csv").string());
  files.push_back("beam_final.csv");

  // Rate region with learned operating points.
  double r1_max = 0.0, r2_max = 0.0;
  for (const auto& p : boundary) {
    r1_max = std::max(r1_max, p.rates.r1);
    r2_max = std::max(r2_max, p.rates.r2);
  }
  SvgPlot plot(560, 560, "Two-cell rate region and learned beams");
  plot.set_range(0.0, 1.08 * r1_max, 0.0, 1.08 * r2_max);
  plot.set_labels("user 1 rate (bits/s/Hz)", "user 2 rate (bits/s/Hz)");
  {
    auto sorted = boundary;
    std::sort(sorted.begin(), sorted.end(),
              [](const ParetoPoint& a, const ParetoPoint& b) {
                return a.rates.r1 < b.rates.r1;
              });
    std::vector<double> xs, ys;
    for (const auto& p : sorted) {
      xs.push_back(p.rates.r1);
      ys.push_back(p.rates.r2);
    }
    plot.polyline(xs, ys, "#555555", 1.5);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    plot.scatter({results[i].final_rates.r1}, {results[i].final_rates.r2},
                 tasks[i].pae ? "#2e7d32" : "#c62828", 4.0, tasks[i].pae);
  }
  plot.legend({{"rate region boundary", "#555555"},
               {"learned, with PAE", "#2e7d32"},
               {"learned, no PAE", "#c62828"}});
  plot.save((outdir / "beam_region.svg").string());
  files.push_back("beam_region.svg");
}

// ---- CSI experiment ----------------------------------------------------------

inline void run_csi(const nlohmann::json& c,
                    const std::filesystem::path& outdir, int jobs,
                    std::vector<std::string>& files) {
  const auto& s = c.at("csi");
  const auto& ds = s.at("dataset");
  const auto& st = s.at("train");
  CsiDatasetConfig dcfg;
  dcfg.n = ds.at("n").get<int>();
  dcfg.n_tx = ds.at("n_tx").get<int>();
  dcfg.n_paths = ds.at("n_paths").get<int>();
  dcfg.angle_spread_deg = ds.at("angle_spread_deg").get<double>();

  AutoencoderConfig acfg;
  acfg.n_tx = dcfg.n_tx;
  acfg.bits = s.at("bits").get<int>();
  acfg.enc_hidden = st.at("enc_hidden").get<std::vector<int>>();
  acfg.dec_hidden = st.at("dec_hidden").get<std::vector<int>>();
  acfg.quant_range = st.at("quant_range").get<double>();
  acfg.epochs = st.at("epochs").get<int>();
  acfg.batch_size = st.at("batch_size").get<int>();
  acfg.lr = st.at("lr").get<double>();
  acfg.val_fraction = st.at("val_fraction").get<double>();

  const auto latent_dims = s.at("latent_dims").get<std::vector<int>>();
  struct Task {
    std::uint64_t seed = 0;
    int latent = 0;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < c.at("seeds").size(); ++i) {
    for (int L : latent_dims) tasks.push_back({seed_at(c, i), L});
  }
  struct Outcome {
    TrainedAutoencoder trained;
    ReconMetrics baseline;
  };
  std::vector<Outcome> outcomes(tasks.size());
  run_indexed(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const auto dataset =
        sample_channels(dcfg, Rng(tasks[i].seed).child("dataset").seed());
    AutoencoderConfig cfg = acfg;
    cfg.latent_dim = tasks[i].latent;
    outcomes[i].trained = train_autoencoder(dataset, cfg, tasks[i].seed);
    outcomes[i].baseline = linear_baseline(dataset, tasks[i].latent, acfg.bits,
                                           acfg.val_fraction)
                               .metrics;
  });

  std::map<int, std::pair<double, double>> agg;  // latent -> (ae, baseline)
  CsvWriter final_csv({"latent_dim", "bits", "seed", "nmse_db", "cosine",
                       "baseline_nmse_db", "baseline_cosine"});
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& trained = outcomes[i].trained;
    CsvWriter epoch_csv({"epoch", "nmse_db", "cosine"});
    for (const auto& e : trained.history) {
      epoch_csv.row().add(e.epoch).add(e.val.nmse_db).add(
          e.val.cosine_similarity);
    }
    const std::string name = "csi_metrics_seed" +
                             std::to_string(tasks[i].seed) + "_L" +
                             std::to_string(tasks[i].latent) + ".csv";
    epoch_csv.save((outdir / name).string());
    files.push_back(name);
    final_csv.row()
        .add(tasks[i].latent)
        .add(acfg.bits)
        .add(tasks[i].seed)
        .add(trained.final_val.nmse_db)
        .add(trained.final_val.cosine_similarity)
        .add(outcomes[i].baseline.nmse_db)
        .add(outcomes[i].baseline.cosine_similarity);
    agg[tasks[i].latent].first += trained.final_val.nmse_db / c.at("seeds").size();
    agg[tasks[i].latent].second += outcomes[i].baseline.nmse_db / c.at("seeds").size();
  }
  final_csv.save((outdir / "csi_final.csv").string());
  files.push_back("csi_final.csv");

  CsvWriter agg_csv({"latent_dim", "bits", "mean_nmse_db",
                     "mean_baseline_nmse_db", "feedback_bits"});
  for (const auto& [L, v] : agg) {
    agg_csv.row().add(L).add(acfg.bits).add(v.first).add(v.second).add(
        L * acfg.bits);
  }
  agg_csv.save((outdir / "csi_aggregate.csv").string());
  files.push_back("csi_aggregate.csv");

  // Feedback record sample for the baseline latent size, first seed.
  const int n_fb = s.at("emit_feedback_samples").get<int>();
  if (n_fb > 0) {
    const std::uint64_t seed0 = seed_at(c, 0);
    const auto dataset =
        sample_channels(dcfg, Rng(seed0).child("dataset").seed());
    AutoencoderConfig cfg = acfg;
    cfg.latent_dim = s.at("baseline_latent_dim").get<int>();
    auto trained = train_autoencoder(dataset, cfg, seed0);
    std::vector<std::vector<int>> codes;
    for (int i = 0; i < n_fb && i < static_cast<int>(dataset.size()); ++i) {
      codes.push_back(encode(trained.ae, dataset[i]));
    }
    std::ofstream f((outdir / "csi_feedback.jsonl").string(),
                    std::ios::binary);
    write_feedback_jsonl(codes, f);
    files.push_back("csi_feedback.jsonl");
  }

  // Rate-distortion style summary plot.
  SvgPlot plot(560, 420, "CSI reconstruction vs latent size");
  double lo = 0.0, hi = -100.0;
  std::vector<double> xs, ae_ys, base_ys;
  for (const auto& [L, v] : agg) {
    xs.push_back(L);
    ae_ys.push_back(v.first);
    base_ys.push_back(v.second);
    lo = std::min({lo, v.first, v.second});
    hi = std::max({hi, v.first, v.second});
  }
  plot.set_range(0.0, xs.back() * 1.1, lo - 2.0, hi + 2.0);
  plot.set_labels("latent dimension", "held-out NMSE (dB)");
  plot.polyline(xs, ae_ys, "#2e7d32", 2.0);
  plot.scatter(xs, ae_ys, "#2e7d32", 3.5);
  plot.polyline(xs, base_ys, "#777777", 2.0, true);
  plot.scatter(xs, base_ys, "#777777", 3.5, false);
  plot.legend({{"autoencoder", "#2e7d32"},
               {"linear PCA baseline", "#777777"}});
  plot.save((outdir / "csi_rate_distortion.svg").string());
  files.push_back("csi_rate_distortion.svg");
}

}  // namespace detail

// Runs the configured experiment, writes per-seed and aggregate artifacts
// plus a manifest, and returns the manifest. `jobs` bounds the worker pool;
// outputs are identical for any value.
inline RunResult run_experiment(const nlohmann::json& validated_config,
                                int jobs = 1) {
  const auto& c = validated_config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::filesystem::path outdir =
      c.at("output_dir").get<std::string>();
  std::filesystem::create_directories(outdir);

  RunResult res;
  const std::string exp = c.at("experiment").get<std::string>();
  if (exp == "tilt") {
    detail::run_tilt(c, outdir, jobs, res.output_files);
  } else if (exp == "beam") {
    detail::run_beam(c, outdir, jobs, res.output_files);
  } else if (exp == "csi") {
    detail::run_csi(c, outdir, jobs, res.output_files);
  } else {
    throw ConfigError("config: experiment must be one of tilt|beam|csi");
  }

  std::sort(res.output_files.begin(), res.output_files.end());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  res.manifest["config"] = c;
  res.manifest["config_hash"] = config_hash(c);
  res.manifest["version"] = kVersion;
  res.manifest["outputs"] = res.output_files;
  res.manifest["wall_clock_sec"] = wall;
  std::ofstream mf((outdir / "manifest.json").string(), std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write manifest");
  mf << res.manifest.dump(2) << "\n";
  return res;
}

}  // namespace ranlab
