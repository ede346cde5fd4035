#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranlab/adam.hpp"
#include "ranlab/complex_vec.hpp"
#include "ranlab/dense_net.hpp"
#include "ranlab/quantizer.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// UE-side encoder, quantized latent, BS-side decoder. The decoder sees
// nothing but the integer codes, so the feedback payload is exactly
// latent_dim * bits per sample.
struct Autoencoder {
  DenseNet encoder;   // 2*n_tx -> ... -> latent_dim
  UniformQuantizer quantizer;
  DenseNet decoder;   // latent_dim -> ... -> 2*n_tx

  int n_tx() const { return encoder.input_size() / 2; }
  int latent_dim() const { return encoder.output_size(); }
  int payload_bits() const { return latent_dim() * quantizer.bits; }
};

struct AutoencoderConfig {
  int n_tx = 32;
  int latent_dim = 8;
  int bits = 4;
  std::vector<int> enc_hidden = {128};
  std::vector<int> dec_hidden = {128};
  double quant_range = 4.0;  // latent clamps to [-quant_range, quant_range]
  Activation hidden_activation = Activation::relu;
  int epochs = 60;
  int batch_size = 64;
  double lr = 1e-3;
  double val_fraction = 0.1;
};

inline void validate_ae_config(const AutoencoderConfig& cfg) {
  if (cfg.n_tx < 1) throw std::invalid_argument("autoencoder: n_tx < 1");
  // Compression uses latent_dim < 2*n_tx; equality is allowed for the
  // near-lossless sanity regime.
  if (cfg.latent_dim < 1 || cfg.latent_dim > 2 * cfg.n_tx) {
    throw std::invalid_argument(
        "autoencoder: latent_dim must be in [1, 2*n_tx]");
  }
  if (cfg.bits < 1) throw std::invalid_argument("autoencoder: bits < 1");
  if (!(cfg.quant_range > 0.0)) {
    throw std::invalid_argument("autoencoder: quant_range <= 0");
  }
  if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.lr > 0.0)) {
    throw std::invalid_argument("autoencoder: bad training params");
  }
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
    throw std::invalid_argument("autoencoder: val_fraction outside (0,1)");
  }
}

inline Autoencoder make_autoencoder(const AutoencoderConfig& cfg, Rng& rng) {
  validate_ae_config(cfg);
  Autoencoder ae;
  std::vector<int> enc_sizes = {2 * cfg.n_tx};
  for (int h : cfg.enc_hidden) enc_sizes.push_back(h);
  enc_sizes.push_back(cfg.latent_dim);
  std::vector<Activation> enc_acts(cfg.enc_hidden.size(),
                                   cfg.hidden_activation);
  enc_acts.push_back(Activation::linear);
  ae.encoder = make_net(enc_sizes, enc_acts);

  std::vector<int> dec_sizes = {cfg.latent_dim};
  for (int h : cfg.dec_hidden) dec_sizes.push_back(h);
  dec_sizes.push_back(2 * cfg.n_tx);
  std::vector<Activation> dec_acts(cfg.dec_hidden.size(),
                                   cfg.hidden_activation);
  dec_acts.push_back(Activation::linear);
  ae.decoder = make_net(dec_sizes, dec_acts);

  ae.quantizer = make_quantizer(cfg.bits, -cfg.quant_range, cfg.quant_range);
  Rng enc_rng = rng.child("encoder");
  Rng dec_rng = rng.child("decoder");
  init_glorot(ae.encoder, enc_rng);
  init_glorot(ae.decoder, dec_rng);
  return ae;
}

inline std::vector<int> encode(const Autoencoder& ae, const cvec& h) {
  if (static_cast<int>(h.size()) != ae.n_tx()) {
    throw std::invalid_argument("encode: channel dimension mismatch");
  }
  const auto latent = forward(ae.encoder, to_interleaved(h));
  return quantize(ae.quantizer, latent).codes;
}

inline cvec decode(const Autoencoder& ae, const std::vector<int>& codes) {
  if (static_cast<int>(codes.size()) != ae.latent_dim()) {
    throw std::invalid_argument("decode: code length mismatch");
  }
  return from_interleaved(forward(ae.decoder, dequantize(ae.quantizer, codes)));
}

struct ReconMetrics {
  double nmse_db = 0.0;
  double cosine_similarity = 0.0;
};

inline constexpr double kNmseFloorDb = -100.0;

// nmse = sum ||H - Hhat||^2 / sum ||H||^2 in dB (floored at -100);
// cosine = mean |H^H Hhat| / (||H|| ||Hhat||).
inline ReconMetrics reconstruction_metrics(const std::vector<cvec>& h,
                                           const std::vector<cvec>& h_hat) {
  if (h.empty() || h.size() != h_hat.size()) {
    throw std::invalid_argument("metrics: size mismatch or empty");
  }
  double num = 0.0;
  double den = 0.0;
  double cos_sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    cvec diff(h[i].size());
    for (std::size_t k = 0; k < diff.size(); ++k) {
      diff[k] = h[i][k] - h_hat[i][k];
    }
    num += norm_sq(diff);
    den += norm_sq(h[i]);
    const double na = std::sqrt(norm_sq(h[i]));
    const double nb = std::sqrt(norm_sq(h_hat[i]));
    cos_sum += (na > 0.0 && nb > 0.0)
                   ? std::abs(inner(h[i], h_hat[i])) / (na * nb)
                   : 0.0;
  }
  ReconMetrics m;
  const double nmse = num / den;
  m.nmse_db = nmse > 0.0
                  ? std::max(kNmseFloorDb, 10.0 * std::log10(nmse))
                  : kNmseFloorDb;
  m.cosine_similarity = std::min(1.0, cos_sum / h.size());
  return m;
}

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // mean squared reconstruction error per sample
  ReconMetrics val;
};

struct TrainedAutoencoder {
  Autoencoder ae;
  std::vector<EpochMetrics> history;
  ReconMetrics final_val;
};

// Minimizes mean squared reconstruction error through the quantized
// bottleneck with the straight-through estimator: the backward pass treats
// dequantize(quantize(x)) as identity inside the quantizer range and kills
// the gradient in the clamped region. Validation uses the last
// val_fraction of the dataset.
inline TrainedAutoencoder train_autoencoder(const std::vector<cvec>& dataset,
                                            const AutoencoderConfig& cfg,
                                            std::uint64_t seed) {
  validate_ae_config(cfg);
  if (dataset.empty()) {
    throw std::invalid_argument("train_autoencoder: empty dataset");
  }
  const std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(cfg.val_fraction * dataset.size()));
  if (n_val >= dataset.size()) {
    throw std::invalid_argument("train_autoencoder: dataset too small");
  }
  const std::size_t n_train = dataset.size() - n_val;

  std::vector<std::vector<double>> x;
  x.reserve(dataset.size());
  for (const auto& h : dataset) x.push_back(to_interleaved(h));
  std::vector<cvec> val(dataset.begin() + n_train, dataset.end());

  Rng root(seed);
  Rng init_rng = root.child("init");
  Rng shuffle_rng = root.child("shuffle");
  TrainedAutoencoder out;
  out.ae = make_autoencoder(cfg, init_rng);
  auto& ae = out.ae;
  AdamState opt_enc = make_adam(ae.encoder, cfg.lr);
  AdamState opt_dec = make_adam(ae.decoder, cfg.lr);
  NetGrads genc = make_grads(ae.encoder);
  NetGrads gdec = make_grads(ae.decoder);

  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  ForwardTrace enc_trace, dec_trace;

  auto validate_now = [&] {
    std::vector<cvec> rec;
    rec.reserve(val.size());
    for (const auto& h : val) rec.push_back(decode(ae, encode(ae, h)));
    return reconstruction_metrics(val, rec);
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
      const std::size_t end = std::min(n_train, start + cfg.batch_size);
      const double count = static_cast<double>(end - start);
      zero_grads(genc);
      zero_grads(gdec);
      for (std::size_t k = start; k < end; ++k) {
        const auto& xi = x[order[k]];
        forward_trace(ae.encoder, xi, enc_trace);
        const auto& latent = enc_trace.post.back();
        const auto q = quantize(ae.quantizer, latent);
        forward_trace(ae.decoder, q.dequantized, dec_trace);
        const auto& xhat = dec_trace.post.back();
        std::vector<double> dldy(xhat.size());
        double loss = 0.0;
        for (std::size_t j = 0; j < xhat.size(); ++j) {
          const double err = xhat[j] - xi[j];
          loss += err * err;
          dldy[j] = 2.0 * err / count;
        }
        epoch_loss += loss;
        auto dl_dlatent = backprop(ae.decoder, dec_trace, dldy, gdec);
        for (std::size_t j = 0; j < dl_dlatent.size(); ++j) {
          dl_dlatent[j] *= ste_passthrough(ae.quantizer, latent[j]);
        }
        backprop(ae.encoder, enc_trace, dl_dlatent, genc);
      }
      adam_step(opt_enc, ae.encoder, genc);
      adam_step(opt_dec, ae.decoder, gdec);
    }
    epoch_loss /= static_cast<double>(n_train);
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("train_autoencoder: non-finite loss at epoch " +
                               std::to_string(epoch));
    }
    out.history.push_back({epoch, epoch_loss, validate_now()});
  }
  out.final_val = out.history.back().val;
  return out;
}

// Feedback records: JSON Lines of {sample_id, codes}.
inline void write_feedback_jsonl(const std::vector<std::vector<int>>& codes,
                                 std::ostream& os) {
  for (std::size_t i = 0; i < codes.size(); ++i) {
    nlohmann::json j;
    j["sample_id"] = i;
    j["codes"] = codes[i];
    os << j.dump() << "\n";
  }
}

inline std::vector<std::vector<int>> read_feedback_jsonl(std::istream& is) {
  std::vector<std::vector<int>> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    const std::size_t id = j.at("sample_id").get<std::size_t>();
    if (id != out.size()) {
      throw std::runtime_error("feedback records out of order");
    }
    out.push_back(j.at("codes").get<std::vector<int>>());
  }
  return out;
}

}  // namespace ranlab
