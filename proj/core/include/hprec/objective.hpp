#pragma once

#include <span>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/matcore.hpp"

namespace hprec {

enum class AnalogConstraint { Unconstrained, PhaseShifter };

/// Hybrid precoder: one M x L analog matrix shared by all bands, and one
/// L x N digital matrix per band.
struct Precoders {
  CMatrix analog;
  std::vector<CMatrix> digital;
  AnalogConstraint constraint = AnalogConstraint::Unconstrained;

  /// (1/B) sum_b ||W_a W_d,b||_F^2
  double power() const;
};

/// Ascent directions of the sum-rate. Each direction D satisfies
/// d/dt R(X + t*Delta)|_0 = 2 Re <D, Delta>, so X + mu*D ascends.
struct RateGradients {
  double rate = 0.0;
  CMatrix analog;                  // M x L
  std::vector<CMatrix> digital;    // B x (L x N)
  std::vector<CMatrix> error;      // B x (N x M); empty unless requested
};

/// Which gradient blocks to compute in one pass.
struct GradientRequest {
  bool analog = true;
  bool digital = true;
  bool error = false;
};

/// Sum-rate (1/B) sum_b log2 |I_N + H_b W_a W_d,b W_d,b^H W_a^H H_b^H|
/// on normalized channels.
double sum_rate(const Precoders& p, const ChannelSet& ch);

/// Sum-rate at the effective channels H_b + E_b. An empty `errors` span is
/// the nominal channel.
double sum_rate(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors);

/// Shared-factorization pass: the rate plus any subset of gradients, all
/// evaluated at the same point (effective channel H_b + E_b when `errors`
/// is non-empty).
RateGradients rate_gradients(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors,
                             GradientRequest request);

CMatrix grad_analog(const Precoders& p, const ChannelSet& ch);
CMatrix grad_digital(const Precoders& p, const ChannelSet& ch, int band);

/// Gradient of the rate w.r.t. the channel perturbation of `band`, at the
/// effective channel H_b + E_b. The robust optimizer steps against it.
CMatrix grad_error(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors, int band);

/// Trajectory loss (1/K) sum_k ln(1 + k) * (-rate_k); rates[k-1] is the
/// sum-rate after iteration k.
double pga_loss(std::span<const double> rates);

/// max over patterns of -sum_rate at the perturbed channel.
double robust_loss(const Precoders& p, const ChannelSet& ch, const ErrorSet& es);

/// min over patterns of sum_rate at the perturbed channel.
double min_rate_over_errors(const Precoders& p, const ChannelSet& ch, const ErrorSet& es);

}  // namespace hprec
