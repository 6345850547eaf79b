#include "hprec/admm.hpp"

#include <cmath>
#include <numbers>

#include "hprec/error.hpp"
#include "hprec/optim.hpp"
#include "hprec/random.hpp"

namespace hprec {

namespace {

void check(const AdmmState& s, const ChannelSet& ch) {
  ch.validate();
  if (!ch.normalized) fail(ErrorCode::NotNormalized, "ADMM expects a normalized channel");
  require(ch.dims.bands == 1, ErrorCode::DimensionMismatch, "ADMM is single-band (B = 1)");
  const auto m = ch.dims.antennas;
  const auto n = ch.dims.users;
  require(s.analog.rows() == m, ErrorCode::DimensionMismatch, "W_a must have M rows");
  require(s.digital.rows() == s.analog.cols() && s.digital.cols() == n, ErrorCode::DimensionMismatch,
          "W_d must be L x N");
  require(s.aux.rows() == m && s.aux.cols() == n, ErrorCode::DimensionMismatch, "V must be M x N");
  require(s.multiplier.rows() == m && s.multiplier.cols() == n, ErrorCode::DimensionMismatch, "Y must be M x N");
}

CMatrix gram(const CMatrix& f) {
  CMatrix g = f * f.adjoint();
  g.diagonal().array() += 1.0;
  return g;
}

// H^H G^{-1} H W_a W_d, the rate factor shared by both precoder gradients.
CMatrix rate_factor(const AdmmState& s, const CMatrix& h) {
  const CMatrix f = h * s.analog * s.digital;
  return h.adjoint() * solve_hpd(gram(f), f);
}

}  // namespace

AdmmParams::AdmmParams(int iterations, double fill) : iterations_(iterations) {
  require(iterations >= 0, ErrorCode::ShapeMismatch, "I_max must be >= 0");
  values_.assign(static_cast<std::size_t>(iterations) * kColumns, fill);
}

AdmmParams::AdmmParams(int iterations, double lambda, double mu, double mu_a, double mu_d, double mu_y)
    : AdmmParams(iterations) {
  for (int k = 0; k < iterations; ++k) {
    at(k, Lambda) = lambda;
    at(k, Mu) = mu;
    at(k, StepAnalog) = mu_a;
    at(k, StepDigital) = mu_d;
    at(k, StepMultiplier) = mu_y;
  }
}

double lagrangian(const AdmmState& s, const ChannelSet& ch, double lambda, double mu) {
  check(s, ch);
  const CMatrix& h = ch.bands.front();
  const CMatrix prod = s.analog * s.digital;
  const CMatrix residual = prod - s.aux;
  const double rate = logdet_hpd(gram(h * prod));
  const double coupling = (s.multiplier.transpose() * residual).trace().real();
  return -rate + lambda * (s.aux.squaredNorm() - ch.dims.users) + mu * residual.squaredNorm() + coupling;
}

CMatrix admm_grad_wa(const AdmmState& s, const ChannelSet& ch, double mu) {
  check(s, ch);
  const CMatrix residual = s.analog * s.digital - s.aux;
  const CMatrix descent = -(1.0 / std::numbers::ln2) * rate_factor(s, ch.bands.front()) * s.digital.adjoint() +
                          mu * residual * s.digital.adjoint() +
                          0.5 * s.multiplier.conjugate() * s.digital.adjoint();
  return descent.conjugate();
}

CMatrix admm_grad_wd(const AdmmState& s, const ChannelSet& ch, double mu) {
  check(s, ch);
  const CMatrix residual = s.analog * s.digital - s.aux;
  const CMatrix descent = -(1.0 / std::numbers::ln2) * s.analog.adjoint() * rate_factor(s, ch.bands.front()) +
                          mu * s.analog.adjoint() * residual +
                          0.5 * s.analog.adjoint() * s.multiplier.conjugate();
  return descent.conjugate();
}

CMatrix admm_v_update(const AdmmState& s, double lambda, double mu) {
  const double denom = lambda + mu;
  if (denom == 0.0 || !std::isfinite(denom)) fail(ErrorCode::DegenerateParameters, "lambda + mu must be nonzero");
  return (mu / denom) * (s.analog * s.digital) - (1.0 / denom) * s.multiplier.conjugate();
}

double admm_v_residual(const AdmmState& s, double lambda, double mu) {
  const CMatrix vc = s.aux.conjugate();
  return (mu * (vc - (s.analog * s.digital).conjugate()) + s.multiplier + lambda * vc).norm();
}

CMatrix admm_y_update(const AdmmState& s, double mu_y, MultiplierMode mode) {
  const double sign = mode == MultiplierMode::Descent ? -1.0 : 1.0;
  return s.multiplier + sign * mu_y * (s.analog * s.digital - s.aux);
}

AdmmState admm_init(const ChannelSet& ch, std::uint64_t seed) {
  ch.validate();
  const auto& d = ch.dims;
  Rng rng = make_rng(seed, {3});
  AdmmState s;
  s.analog = complex_gaussian(d.antennas, d.rf_chains, rng);
  const CMatrix digital = complex_gaussian(d.rf_chains, d.users, rng);
  s.digital = project_digital(std::span<const CMatrix>(&digital, 1), s.analog, d.users).front();
  s.aux = s.analog * s.digital;
  s.multiplier = CMatrix::Zero(d.antennas, d.users);
  return s;
}

AdmmResult admm_run(const ChannelSet& ch, const AdmmParams& params, std::uint64_t seed, MultiplierMode mode) {
  for (double v : params.values()) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument, "ADMM parameters must be finite and >= 0");
  }
  AdmmState s = admm_init(ch, seed);
  check(s, ch);

  auto rate_of = [&ch](const AdmmState& st) {
    return sum_rate(Precoders{st.analog, {st.digital}, AnalogConstraint::Unconstrained}, ch);
  };

  AdmmResult out;
  out.rates.reserve(static_cast<std::size_t>(params.iterations()) + 1);
  out.rates.push_back(rate_of(s));
  for (int k = 0; k < params.iterations(); ++k) {
    const double lambda = params.at(k, AdmmParams::Lambda);
    const double mu = params.at(k, AdmmParams::Mu);
    s.analog -= params.at(k, AdmmParams::StepAnalog) * admm_grad_wa(s, ch, mu).conjugate();
    s.digital -= params.at(k, AdmmParams::StepDigital) * admm_grad_wd(s, ch, mu).conjugate();
    s.aux = admm_v_update(s, lambda, mu);
    s.multiplier = admm_y_update(s, params.at(k, AdmmParams::StepMultiplier), mode);
    if (!all_finite(s.analog) || !all_finite(s.digital) || !all_finite(s.multiplier)) {
      fail(ErrorCode::ConvergenceFailure, "ADMM iterate diverged at iteration " + std::to_string(k));
    }
    out.rates.push_back(rate_of(s));
  }

  out.precoders = Precoders{s.analog, project_digital(std::span<const CMatrix>(&s.digital, 1), s.analog, ch.dims.users),
                            AnalogConstraint::Unconstrained};
  out.final_rate = sum_rate(out.precoders, ch);
  out.state = std::move(s);
  return out;
}

}  // namespace hprec
