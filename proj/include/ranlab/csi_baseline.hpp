#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ranlab/complex_vec.hpp"
#include "ranlab/csi_autoencoder.hpp"
#include "ranlab/quantizer.hpp"

namespace ranlab {

struct LinearBaselineResult {
  ReconMetrics metrics;
  double quant_range = 0.0;       // chosen symmetric coefficient range
  std::vector<double> mean;       // training mean (real representation)
  std::vector<std::vector<double>> basis;  // top components, row per component
};

// Fixed-budget linear reference: project the real channel representation
// onto the top principal directions of the training split, quantize the
// coefficients with the same midrise quantizer the autoencoder uses, and
// reconstruct. The symmetric coefficient range is picked from a small
// deterministic candidate grid by training-split NMSE.
inline LinearBaselineResult linear_baseline(const std::vector<cvec>& dataset,
                                            int latent_dim, int bits,
                                            double val_fraction = 0.1) {
  if (dataset.empty()) {
    throw std::invalid_argument("linear_baseline: empty dataset");
  }
  const int d = 2 * static_cast<int>(dataset.front().size());
  if (latent_dim < 0 || latent_dim > d) {
    throw std::invalid_argument("linear_baseline: latent_dim outside [0, 2*n_tx]");
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("linear_baseline: val_fraction outside (0,1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t n_val =
      std::max<std::size_t>(1, static_cast<std::size_t>(val_fraction * n));
  if (n_val >= n) {
    throw std::invalid_argument("linear_baseline: dataset too small");
  }
  const std::size_t n_train = n - n_val;

  LinearBaselineResult out;
  std::vector<cvec> val(dataset.begin() + n_train, dataset.end());

  if (latent_dim == 0) {
    // Degenerate budget: nothing can be fed back, reconstruct zero.
    std::vector<cvec> zeros(val.size(),
                            cvec(dataset.front().size(), {0.0, 0.0}));
    out.metrics = reconstruction_metrics(val, zeros);
    return out;
  }

  Eigen::MatrixXd X(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = to_interleaved(dataset[i]);
    for (int j = 0; j < d; ++j) X(i, j) = r[j];
  }
  const Eigen::RowVectorXd mean = X.topRows(n_train).colwise().mean();
  Eigen::MatrixXd centered = X;
  centered.rowwise() -= mean;
  const Eigen::MatrixXd cov =
      centered.topRows(n_train).transpose() * centered.topRows(n_train) /
      static_cast<double>(n_train);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("linear_baseline: eigendecomposition failed");
  }

  // Eigenvalues come in ascending order; take the trailing latent_dim
  // columns and fix each component's sign by its largest-magnitude entry.
  Eigen::MatrixXd V(d, latent_dim);
  for (int k = 0; k < latent_dim; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(d - 1 - k);
    int arg = 0;
    for (int j = 1; j < d; ++j) {
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    }
    if (v(arg) < 0.0) v = -v;
    V.col(k) = v;
  }
  const double sigma_max =
      std::sqrt(std::max(0.0, es.eigenvalues()(d - 1)));

  const Eigen::MatrixXd coeffs = centered * V;  // n x latent_dim

  auto eval_split = [&](double range, std::size_t begin, std::size_t count,
                        std::vector<cvec>* recon_out) {
    const UniformQuantizer q = make_quantizer(bits, -range, range);
    double num = 0.0;
    double den = 0.0;
    if (recon_out) recon_out->clear();
    for (std::size_t i = begin; i < begin + count; ++i) {
      Eigen::VectorXd c(latent_dim);
      for (int k = 0; k < latent_dim; ++k) {
        c(k) = dequantize_scalar(q, quantize_scalar(q, coeffs(i, k)));
      }
      const Eigen::VectorXd xr = V * c + mean.transpose();
      Eigen::VectorXd err = X.row(i).transpose() - xr;
      num += err.squaredNorm();
      den += X.row(i).squaredNorm();
      if (recon_out) {
        std::vector<double> r(xr.data(), xr.data() + d);
        recon_out->push_back(from_interleaved(r));
      }
    }
    return num / den;
  };

  const double candidates[] = {1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
  double best_range = candidates[0] * sigma_max;
  double best_nmse = std::numeric_limits<double>::infinity();
  for (double kappa : candidates) {
    const double range = kappa * sigma_max;
    if (!(range > 0.0)) continue;
    const double nmse = eval_split(range, 0, n_train, nullptr);
    if (nmse < best_nmse) {
      best_nmse = nmse;
      best_range = range;
    }
  }

  std::vector<cvec> recon;
  eval_split(best_range, n_train, n_val, &recon);
  out.metrics = reconstruction_metrics(val, recon);
  out.quant_range = best_range;
  out.mean.assign(mean.data(), mean.data() + d);
  out.basis.resize(latent_dim);
  for (int k = 0; k < latent_dim; ++k) {
    out.basis[k].assign(V.col(k).data(), V.col(k).data() + d);
  }
  return out;
}

}  // namespace ranlab
