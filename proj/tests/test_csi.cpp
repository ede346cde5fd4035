#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <sstream>

#include "ranlab/csi_autoencoder.hpp"
#include "ranlab/csi_baseline.hpp"
#include "ranlab/csi_channel.hpp"

using namespace ranlab;

TEST_CASE("sample_channels: single path lies on the steering vector") {
  CsiDatasetConfig cfg;
  cfg.n = 16;
  cfg.n_tx = 8;
  cfg.n_paths = 1;
  auto data = sample_channels(cfg, 3);
  for (const auto& h : data) {
    // h = g * a(theta): |h_m| constant across antennas.
    const double m0 = std::abs(h[0]);
    for (const auto& x : h) {
      CHECK(std::abs(x) == Catch::Approx(m0).epsilon(1e-9));
    }
  }
}

TEST_CASE("sample_channels: unit mean power per dimension after normalization") {
  auto data = sample_channels(512, 32, 3, 11);
  double power = 0.0;
  for (const auto& h : data) power += norm_sq(h);
  power /= 512.0 * 32.0;
  CHECK(power == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("sample_channels: deterministic per seed, validates input") {
  auto a = sample_channels(32, 16, 2, 5);
  auto b = sample_channels(32, 16, 2, 5);
  CHECK(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK_THROWS_AS(sample_channels(0, 16, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(sample_channels(8, 16, 0, 5), std::invalid_argument);
}

TEST_CASE("encode: payload arithmetic and determinism") {
  Rng rng(7);
  AutoencoderConfig cfg;
  cfg.n_tx = 8;
  cfg.latent_dim = 8;
  cfg.bits = 1;
  auto ae = make_autoencoder(cfg, rng);
  CHECK(ae.payload_bits() == 8);
  auto data = sample_channels(4, 8, 2, 9);
  auto codes = encode(ae, data[0]);
  CHECK(codes.size() == 8);
  for (int c : codes) {
    CHECK(c >= 0);
    CHECK(c < 2);
  }
  CHECK(encode(ae, data[0]) == codes);
  cvec wrong(5, {0.0, 0.0});
  CHECK_THROWS_AS(encode(ae, wrong), std::invalid_argument);
}

TEST_CASE("feedback records: lossless JSONL round-trip") {
  Rng rng(13);
  AutoencoderConfig cfg;
  cfg.n_tx = 8;
  cfg.latent_dim = 4;
  cfg.bits = 3;
  auto ae = make_autoencoder(cfg, rng);
  auto data = sample_channels(10, 8, 2, 21);
  std::vector<std::vector<int>> codes;
  for (const auto& h : data) codes.push_back(encode(ae, h));
  std::stringstream ss;
  write_feedback_jsonl(codes, ss);
  CHECK(read_feedback_jsonl(ss) == codes);
}

TEST_CASE("decode: fixed codes give fixed output, bad codes rejected") {
  Rng rng(17);
  AutoencoderConfig cfg;
  cfg.n_tx = 8;
  cfg.latent_dim = 4;
  cfg.bits = 2;
  auto ae = make_autoencoder(cfg, rng);
  std::vector<int> codes = {0, 3, 1, 2};
  auto h1 = decode(ae, codes);
  auto h2 = decode(ae, codes);
  CHECK(h1 == h2);
  CHECK(h1.size() == 8);
  CHECK_THROWS_AS(decode(ae, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(decode(ae, {0, 1, 2, 7}), std::invalid_argument);
}

TEST_CASE("metrics: perfect reconstruction hits floor, self-cosine is 1") {
  auto data = sample_channels(8, 16, 2, 31);
  auto m = reconstruction_metrics(data, data);
  CHECK(m.nmse_db == kNmseFloorDb);
  CHECK(m.cosine_similarity == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("train_autoencoder: near-lossless wide linear config reaches -20 dB") {
  // latent_dim = 2*n_tx with 16-bit quantization and linear activations:
  // the map only has to learn an identity-like factorization.
  CsiDatasetConfig dcfg;
  dcfg.n = 512;
  dcfg.n_tx = 8;
  dcfg.n_paths = 2;
  auto data = sample_channels(dcfg, 41);
  AutoencoderConfig cfg;
  cfg.n_tx = 8;
  cfg.latent_dim = 16;
  cfg.bits = 16;
  cfg.enc_hidden = {32};
  cfg.dec_hidden = {32};
  cfg.hidden_activation = Activation::linear;
  cfg.epochs = 150;
  cfg.lr = 2e-3;
  auto trained = train_autoencoder(data, cfg, 5);
  INFO("val nmse " << trained.final_val.nmse_db << " dB");
  CHECK(trained.final_val.nmse_db < -20.0);
}

TEST_CASE("train_autoencoder: loss nonincreasing over 5-epoch windows") {
  CsiDatasetConfig dcfg;
  dcfg.n = 384;
  dcfg.n_tx = 16;
  dcfg.n_paths = 3;
  auto data = sample_channels(dcfg, 43);
  AutoencoderConfig cfg;
  cfg.n_tx = 16;
  cfg.latent_dim = 8;
  cfg.bits = 4;
  cfg.epochs = 40;
  auto trained = train_autoencoder(data, cfg, 6);
  std::vector<double> windows;
  for (std::size_t start = 0; start + 5 <= trained.history.size(); start += 5) {
    double acc = 0.0;
    for (std::size_t k = start; k < start + 5; ++k) {
      acc += trained.history[k].train_loss;
    }
    windows.push_back(acc / 5.0);
  }
  REQUIRE(windows.size() >= 4);
  for (std::size_t i = 1; i < windows.size(); ++i) {
    CHECK(windows[i] <= windows[i - 1] + 1e-9);
  }
}

TEST_CASE("train_autoencoder: deterministic metrics for fixed seed") {
  auto data = sample_channels(256, 16, 3, 47);
  AutoencoderConfig cfg;
  cfg.n_tx = 16;
  cfg.latent_dim = 6;
  cfg.bits = 4;
  cfg.epochs = 8;
  auto a = train_autoencoder(data, cfg, 9);
  auto b = train_autoencoder(data, cfg, 9);
  CHECK(a.final_val.nmse_db == b.final_val.nmse_db);
  CHECK(a.final_val.cosine_similarity == b.final_val.cosine_similarity);
  CHECK(a.ae.encoder.weights == b.ae.encoder.weights);
  CHECK_THROWS_AS(train_autoencoder({}, cfg, 9), std::invalid_argument);
}

TEST_CASE("decode sees only the codes: payload is the entire interface") {
  // Encoding the same channel through two autoencoders that share the
  // decoder but differ in the encoder produces the same reconstruction
  // whenever the emitted codes agree.
  Rng rng(53);
  AutoencoderConfig cfg;
  cfg.n_tx = 8;
  cfg.latent_dim = 4;
  cfg.bits = 2;
  auto ae1 = make_autoencoder(cfg, rng);
  auto ae2 = ae1;
  Rng rng2(54);
  init_glorot(ae2.encoder, rng2);  // different UE vendor, same decoder
  auto data = sample_channels(32, 8, 2, 55);
  for (const auto& h : data) {
    auto c1 = encode(ae1, h);
    auto c2 = encode(ae2, h);
    if (c1 == c2) {
      CHECK(decode(ae1, c1) == decode(ae2, c2));
    }
    CHECK(decode(ae1, c1) == decode(ae1, c1));
  }
}

TEST_CASE("linear_baseline: full basis with fine quantization is near-exact") {
  auto data = sample_channels(512, 8, 2, 61);
  auto res = linear_baseline(data, 16, 16);
  INFO("nmse " << res.metrics.nmse_db);
  CHECK(res.metrics.nmse_db < -40.0);
}

TEST_CASE("linear_baseline: zero latent budget reconstructs zero") {
  auto data = sample_channels(128, 8, 2, 67);
  auto res = linear_baseline(data, 0, 4);
  CHECK(res.metrics.nmse_db == Catch::Approx(0.0).margin(1e-9));
  CHECK(res.metrics.cosine_similarity == 0.0);
  CHECK_THROWS_AS(linear_baseline(data, 17, 4), std::invalid_argument);
}

TEST_CASE("linear_baseline: metrics match straight-line recomputation") {
  // Independent oracle: rebuild the projection pipeline from the returned
  // mean/basis/range with plain loops and recompute NMSE and cosine.
  auto data = sample_channels(256, 8, 3, 71);
  const int latent = 6;
  const int bits = 5;
  auto res = linear_baseline(data, latent, bits);
  const std::size_t n = data.size();
  const std::size_t n_val = static_cast<std::size_t>(0.1 * n);
  const std::size_t n_train = n - n_val;
  const int d = 16;
  const double lo = -res.quant_range;
  const double step = 2.0 * res.quant_range / (1 << bits);
  double num = 0.0, den = 0.0, cos_sum = 0.0;
  for (std::size_t i = n_train; i < n; ++i) {
    const auto xr = to_interleaved(data[i]);
    std::vector<double> xhat = res.mean;
    for (int k = 0; k < latent; ++k) {
      double c = 0.0;
      for (int j = 0; j < d; ++j) {
        c += res.basis[k][j] * (xr[j] - res.mean[j]);
      }
      int code = static_cast<int>(std::floor((c - lo) / step));
      code = std::clamp(code, 0, (1 << bits) - 1);
      const double cq = lo + (code + 0.5) * step;
      for (int j = 0; j < d; ++j) xhat[j] += res.basis[k][j] * cq;
    }
    double e2 = 0.0, x2 = 0.0, h2 = 0.0;
    std::complex<double> dot(0.0, 0.0);
    for (int j = 0; j < d; ++j) {
      e2 += (xr[j] - xhat[j]) * (xr[j] - xhat[j]);
      x2 += xr[j] * xr[j];
    }
    auto hh = from_interleaved(xhat);
    h2 = norm_sq(hh);
    dot = inner(data[i], hh);
    num += e2;
    den += x2;
    cos_sum += (x2 > 0 && h2 > 0) ? std::abs(dot) / std::sqrt(x2 * h2) : 0.0;
  }
  const double nmse_db = 10.0 * std::log10(num / den);
  CHECK(res.metrics.nmse_db == Catch::Approx(nmse_db).margin(1e-9));
  CHECK(res.metrics.cosine_similarity ==
        Catch::Approx(cos_sum / n_val).margin(1e-9));
}

TEST_CASE("straight-through estimator: gradients match identity in range") {
  // With every latent inside the quantizer range, replacing the quantizer
  // by the identity must leave the encoder gradient unchanged.
  Rng rng(81);
  AutoencoderConfig cfg;
  cfg.n_tx = 4;
  cfg.latent_dim = 3;
  cfg.bits = 4;
  cfg.quant_range = 50.0;  // generous: everything lands in range
  auto ae = make_autoencoder(cfg, rng);
  auto data = sample_channels(4, 4, 2, 83);
  const auto x = to_interleaved(data[0]);

  ForwardTrace enc_trace, dec_trace;
  forward_trace(ae.encoder, x, enc_trace);
  const auto latent = enc_trace.post.back();
  const auto q = quantize(ae.quantizer, latent);
  forward_trace(ae.decoder, q.dequantized, dec_trace);
  std::vector<double> dldy(dec_trace.post.back().size(), 1.0);

  NetGrads gdec = make_grads(ae.decoder);
  auto dl_dlatent = backprop(ae.decoder, dec_trace, dldy, gdec);
  auto ste = dl_dlatent;
  for (std::size_t j = 0; j < ste.size(); ++j) {
    ste[j] *= ste_passthrough(ae.quantizer, latent[j]);
  }
  CHECK(ste == dl_dlatent);  // identity on in-range latents

  // Out-of-range latent kills the corresponding component.
  auto tight = make_quantizer(4, -1e-6, 1e-6);
  double masked = 0.0;
  for (std::size_t j = 0; j < ste.size(); ++j) {
    masked += std::abs(dl_dlatent[j] * ste_passthrough(tight, latent[j]));
  }
  CHECK(masked == 0.0);
}
