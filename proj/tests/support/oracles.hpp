// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the Cholesky-based paths of the library under test.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hprec/hprec.hpp"
#include "hprec/random.hpp"

namespace hprec::testing {

/// Sum of log2 eigenvalues of a Hermitian matrix via a symmetric eigensolver.
inline double logdet_eig(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::log2(es.eigenvalues()[i]);
  return acc;
}

/// Sum-rate from eigenvalues of each band's F F^H (F = H W_a W_d,b):
/// (1/B) sum_b sum_i log2(1 + lambda_i).
inline double sum_rate_eig(const Precoders& p, const ChannelSet& ch, const std::vector<CMatrix>& errors = {}) {
  double acc = 0.0;
  for (std::size_t b = 0; b < ch.bands.size(); ++b) {
    CMatrix h = ch.bands[b];
    if (!errors.empty()) h += errors[b];
    const CMatrix f = h * p.analog * p.digital[b];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f * f.adjoint(), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::log2(1.0 + std::max(0.0, es.eigenvalues()[i]));
  }
  return acc / static_cast<double>(ch.bands.size());
}

/// Central finite difference of a scalar function along t.
inline double central_diff(const std::function<double(double)>& f, double h = 1e-6) {
  return (f(h) - f(-h)) / (2.0 * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12}); }

/// Random normalized channel plus random precoders of the given shape.
struct Instance {
  ChannelSet channel;
  Precoders precoders;
  std::vector<CMatrix> errors;
};

inline Instance random_instance(const SystemDims& d, std::uint64_t seed, double error_scale = 0.1) {
  Rng rng = make_rng(seed, {0xabcULL});
  Instance in;
  in.channel = normalize(gen_rayleigh(d, 1, seed).realizations.front());
  in.precoders.analog = complex_gaussian(d.antennas, d.rf_chains, rng);
  for (int b = 0; b < d.bands; ++b) {
    in.precoders.digital.push_back(complex_gaussian(d.rf_chains, d.users, rng));
    in.errors.push_back(error_scale * complex_gaussian(d.users, d.antennas, rng));
  }
  return in;
}

/// Random dims with every size in [1, cap].
inline SystemDims random_dims(Rng& rng, int max_b, int max_n, int max_l, int max_m) {
  std::uniform_int_distribution<int> bd(1, max_b), nd(1, max_n), md(1, max_m);
  SystemDims d;
  d.bands = bd(rng);
  d.users = nd(rng);
  d.antennas = md(rng);
  std::uniform_int_distribution<int> ld(1, std::min(max_l, d.antennas));
  d.rf_chains = ld(rng);
  std::uniform_real_distribution<double> nv(0.3, 2.0);
  d.noise_var = nv(rng);
  return d;
}

/// Random Hermitian positive definite matrix B B^H + I.
inline CMatrix random_hpd(Eigen::Index n, Rng& rng) {
  const CMatrix b = complex_gaussian(n, n, rng);
  return b * b.adjoint() + CMatrix::Identity(n, n);
}

/// Random unitary via QR of a Gaussian matrix.
inline CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(complex_gaussian(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace hprec::testing
