#include "hprec/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hprec/error.hpp"

namespace hprec {

namespace {

void check_shapes(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors) {
  if (!ch.normalized) fail(ErrorCode::NotNormalized, "objective expects normalized channels");
  const auto& d = ch.dims;
  require(static_cast<int>(ch.bands.size()) == d.bands, ErrorCode::DimensionMismatch, "band count differs from B");
  require(p.analog.rows() == d.antennas, ErrorCode::DimensionMismatch, "analog precoder must have M rows");
  require(static_cast<int>(p.digital.size()) == d.bands, ErrorCode::DimensionMismatch, "need one digital precoder per band");
  for (int b = 0; b < d.bands; ++b) {
    const auto& h = ch.bands[static_cast<std::size_t>(b)];
    const auto& wd = p.digital[static_cast<std::size_t>(b)];
    require(h.rows() == d.users && h.cols() == d.antennas, ErrorCode::DimensionMismatch, "sub-channel must be N x M");
    require(wd.rows() == p.analog.cols() && wd.cols() == d.users, ErrorCode::DimensionMismatch,
            "digital precoder must be L x N");
  }
  if (!errors.empty()) {
    require(static_cast<int>(errors.size()) == d.bands, ErrorCode::DimensionMismatch, "need one error matrix per band");
    for (const auto& e : errors) {
      require(e.rows() == d.users && e.cols() == d.antennas, ErrorCode::DimensionMismatch, "error matrix must be N x M");
    }
  }
}

CMatrix effective_channel(const ChannelSet& ch, std::span<const CMatrix> errors, std::size_t b) {
  return errors.empty() ? ch.bands[b] : CMatrix(ch.bands[b] + errors[b]);
}

CMatrix gram(const CMatrix& f) {
  CMatrix g = f * f.adjoint();
  g.diagonal().array() += 1.0;
  return g;
}

}  // namespace

double Precoders::power() const {
  if (digital.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& wd : digital) acc += (analog * wd).squaredNorm();
  return acc / static_cast<double>(digital.size());
}

double sum_rate(const Precoders& p, const ChannelSet& ch) { return sum_rate(p, ch, {}); }

double sum_rate(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors) {
  check_shapes(p, ch, errors);
  double acc = 0.0;
  for (std::size_t b = 0; b < ch.bands.size(); ++b) {
    const CMatrix f = effective_channel(ch, errors, b) * p.analog * p.digital[b];
    acc += logdet_hpd(gram(f));
  }
  // log|I + F F^H| >= 0; clamp round-off below zero.
  return std::max(0.0, acc / static_cast<double>(ch.bands.size()));
}

RateGradients rate_gradients(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors,
                             GradientRequest request) {
  check_shapes(p, ch, errors);
  const auto nb = ch.bands.size();
  const double scale = 1.0 / (static_cast<double>(nb) * std::numbers::ln2);

  RateGradients out;
  if (request.analog) out.analog = CMatrix::Zero(p.analog.rows(), p.analog.cols());
  if (request.digital) out.digital.reserve(nb);
  if (request.error) out.error.reserve(nb);

  double acc = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const CMatrix h = effective_channel(ch, errors, b);
    const CMatrix& wd = p.digital[b];
    const CMatrix precoder = p.analog * wd;  // M x N
    const CMatrix f = h * precoder;          // N x N
    const HpdFactorization g(gram(f));
    acc += g.log2det();
    // X = G^{-1} F; every gradient factors through it.
    const CMatrix x = g.solve(f);
    if (request.analog) out.analog.noalias() += h.adjoint() * x * wd.adjoint();
    if (request.digital) out.digital.push_back(scale * (p.analog.adjoint() * (h.adjoint() * x)));
    if (request.error) out.error.push_back(scale * (x * precoder.adjoint()));
  }
  if (request.analog) out.analog *= scale;
  out.rate = std::max(0.0, acc / static_cast<double>(nb));
  return out;
}

CMatrix grad_analog(const Precoders& p, const ChannelSet& ch) {
  return rate_gradients(p, ch, {}, {.analog = true, .digital = false, .error = false}).analog;
}

CMatrix grad_digital(const Precoders& p, const ChannelSet& ch, int band) {
  require(band >= 0 && band < ch.dims.bands, ErrorCode::DimensionMismatch, "band index out of range");
  auto g = rate_gradients(p, ch, {}, {.analog = false, .digital = true, .error = false});
  return std::move(g.digital[static_cast<std::size_t>(band)]);
}

CMatrix grad_error(const Precoders& p, const ChannelSet& ch, std::span<const CMatrix> errors, int band) {
  require(band >= 0 && band < ch.dims.bands, ErrorCode::DimensionMismatch, "band index out of range");
  auto g = rate_gradients(p, ch, errors, {.analog = false, .digital = false, .error = true});
  return std::move(g.error[static_cast<std::size_t>(band)]);
}

double pga_loss(std::span<const double> rates) {
  if (rates.empty()) fail(ErrorCode::EmptyTrajectory, "pga_loss needs at least one rate");
  double acc = 0.0;
  for (std::size_t k = 1; k <= rates.size(); ++k) acc += std::log(1.0 + static_cast<double>(k)) * -rates[k - 1];
  return acc / static_cast<double>(rates.size());
}

double min_rate_over_errors(const Precoders& p, const ChannelSet& ch, const ErrorSet& es) {
  if (es.patterns.empty()) fail(ErrorCode::EmptySet, "error set has no patterns");
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& pattern : es.patterns) worst = std::min(worst, sum_rate(p, ch, pattern));
  return worst;
}

double robust_loss(const Precoders& p, const ChannelSet& ch, const ErrorSet& es) {
  return -min_rate_over_errors(p, ch, es);
}

}  // namespace hprec
