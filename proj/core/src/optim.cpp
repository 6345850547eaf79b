#include "hprec/optim.hpp"

#include <cmath>
#include <string>

#include "hprec/error.hpp"
#include "hprec/random.hpp"

namespace hprec {

namespace {

// Stream ids for make_rng so that digital and error initializations never
// share a sequence.
constexpr std::uint64_t kDigitalStream = 1;
constexpr std::uint64_t kErrorStream = 2;

void check_steps(std::span<const double> values) {
  for (double v : values) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument, "step sizes must be finite and non-negative");
  }
}

void check_channel(const ChannelSet& ch) {
  ch.validate();
  if (!ch.normalized) fail(ErrorCode::NotNormalized, "optimizers expect normalized channels");
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedules

PgaSchedule::PgaSchedule(int iterations, int bands, double fill)
    : iterations_(iterations), bands_(bands) {
  require(iterations >= 0 && bands >= 1, ErrorCode::ShapeMismatch, "PGA schedule needs K >= 0 and B >= 1");
  values_.assign(static_cast<std::size_t>(iterations) * static_cast<std::size_t>(bands + 1), fill);
}

std::size_t PgaSchedule::index(int k, int col) const {
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(bands_ + 1) + static_cast<std::size_t>(col);
}

PcmpSchedule::PcmpSchedule(int iterations, int inner, int bands, double fill)
    : iterations_(iterations), inner_(inner), bands_(bands) {
  require(iterations >= 0 && inner >= 1 && bands >= 1, ErrorCode::ShapeMismatch,
          "PCMP schedule needs K >= 0, i_max >= 1 and B >= 1");
  values_.assign(static_cast<std::size_t>(iterations) * static_cast<std::size_t>(inner) *
                     static_cast<std::size_t>(2 * bands + 1),
                 fill);
}

std::size_t PcmpSchedule::index(int k, int i, int col) const {
  const auto w = static_cast<std::size_t>(width());
  return (static_cast<std::size_t>(k) * static_cast<std::size_t>(inner_) + static_cast<std::size_t>(i)) * w +
         static_cast<std::size_t>(col);
}

PcmpSchedule PcmpSchedule::from_pga(const PgaSchedule& pga, double error_step) {
  PcmpSchedule s(pga.iterations(), 1, pga.bands(), error_step);
  for (int k = 0; k < pga.iterations(); ++k) {
    for (int c = 0; c <= pga.bands(); ++c) s.at(k, 0, c) = pga.at(k, c);
  }
  return s;
}

std::vector<double> Trajectory::rates() const {
  std::vector<double> out;
  out.reserve(iterates.size());
  for (const auto& it : iterates) out.push_back(it.rate);
  return out;
}

// ---------------------------------------------------------------------------
// Initialization and projections

CMatrix init_analog(const ChannelSet& ch, int rf_chains) {
  ch.validate();
  require(rf_chains >= 1 && rf_chains <= ch.dims.antennas, ErrorCode::InvalidArgument, "need 1 <= L <= M");
  CMatrix avg = CMatrix::Zero(ch.dims.users, ch.dims.antennas);
  for (const auto& h : ch.bands) avg += h;
  avg /= static_cast<double>(ch.bands.size());
  return svd_full(avg).right_vectors(rf_chains);
}

std::vector<CMatrix> init_digital(const SystemDims& dims, const CMatrix& analog, std::uint64_t seed) {
  dims.validate();
  require(analog.rows() == dims.antennas, ErrorCode::DimensionMismatch, "analog precoder must have M rows");
  Rng rng = make_rng(seed, {kDigitalStream});
  std::vector<CMatrix> digital;
  digital.reserve(static_cast<std::size_t>(dims.bands));
  for (int b = 0; b < dims.bands; ++b) digital.push_back(complex_gaussian(analog.cols(), dims.users, rng));
  return project_digital(digital, analog, dims.users);
}

Precoders init_precoders(const ChannelSet& ch, AnalogConstraint c, std::uint64_t seed) {
  Precoders p;
  p.constraint = c;
  p.analog = project_analog(init_analog(ch, ch.dims.rf_chains), c);
  p.digital = init_digital(ch.dims, p.analog, seed);
  return p;
}

CMatrix project_analog(const CMatrix& w, AnalogConstraint c) {
  if (c == AnalogConstraint::Unconstrained) return w;
  return w.unaryExpr([](const cd& z) {
    const double mag = std::abs(z);
    return mag > 0.0 ? z / mag : cd(1.0, 0.0);
  });
}

std::vector<CMatrix> project_digital(std::span<const CMatrix> digital, const CMatrix& analog, int users) {
  require(!digital.empty(), ErrorCode::DimensionMismatch, "project_digital: no bands");
  double total = 0.0;
  for (const auto& wd : digital) {
    require(wd.rows() == analog.cols(), ErrorCode::DimensionMismatch, "digital precoder must have L rows");
    total += (analog * wd).squaredNorm();
  }
  if (!(total > 0.0) || !std::isfinite(total)) fail(ErrorCode::ZeroPower, "digital precoders carry no power");
  const double factor = std::sqrt(static_cast<double>(users) * static_cast<double>(digital.size()) / total);
  std::vector<CMatrix> out;
  out.reserve(digital.size());
  for (const auto& wd : digital) out.push_back(factor * wd);
  return out;
}

CMatrix project_error(const CMatrix& e, double epsilon, RadiusMode mode) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be >= 0");
  const double radius =
      mode == RadiusMode::Frobenius ? epsilon : epsilon * static_cast<double>(e.rows() * e.cols());
  if (radius == 0.0) return CMatrix::Zero(e.rows(), e.cols());
  const double norm = e.norm();
  if (norm <= radius) return e;
  return e * (radius / norm);
}

// ---------------------------------------------------------------------------
// PGA

Trajectory pga_run(const ChannelSet& ch, const PgaSchedule& sched, AnalogConstraint c, std::uint64_t seed) {
  check_channel(ch);
  require(sched.bands() == ch.dims.bands, ErrorCode::DimensionMismatch, "schedule band count differs from B");
  check_steps(sched.values());

  const int users = ch.dims.users;
  Trajectory traj;
  traj.iterates.reserve(static_cast<std::size_t>(sched.iterations()) + 1);

  Precoders p = init_precoders(ch, c, seed);
  for (int k = 0; k < sched.iterations(); ++k) {
    // Analog step from (W_a^k, W_d^k); the same pass yields the rate of iterate k.
    auto ga = rate_gradients(p, ch, {}, {.analog = true, .digital = false, .error = false});
    traj.iterates.push_back({p, ga.rate, {}});

    Precoders next;
    next.constraint = c;
    next.analog = project_analog(p.analog + sched.analog(k) * ga.analog, c);

    // Digital steps for all bands from (W_a^{k+1}, W_d^k), then one joint projection.
    Precoders mid{next.analog, p.digital, c};
    auto gd = rate_gradients(mid, ch, {}, {.analog = false, .digital = true, .error = false});
    std::vector<CMatrix> hat;
    hat.reserve(p.digital.size());
    for (int b = 0; b < ch.dims.bands; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      hat.push_back(p.digital[bi] + sched.digital(k, b) * gd.digital[bi]);
    }
    next.digital = project_digital(hat, next.analog, users);
    p = std::move(next);
  }
  const double rate = sum_rate(p, ch);
  traj.iterates.push_back({std::move(p), rate, {}});
  return traj;
}

// ---------------------------------------------------------------------------
// PCMP

Trajectory pcmp_run(const ChannelSet& ch, const PcmpSchedule& sched, double epsilon, AnalogConstraint c,
                    std::uint64_t seed, PcmpOptions options) {
  check_channel(ch);
  require(sched.bands() == ch.dims.bands, ErrorCode::DimensionMismatch, "schedule band count differs from B");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be >= 0");
  check_steps(sched.values());

  const auto nb = static_cast<std::size_t>(ch.dims.bands);
  const int users = ch.dims.users;

  Precoders p = init_precoders(ch, c, seed);
  std::vector<CMatrix> errs;
  errs.reserve(nb);
  {
    Rng rng = make_rng(seed, {kErrorStream});
    for (std::size_t b = 0; b < nb; ++b) {
      if (epsilon == 0.0) {
        errs.push_back(CMatrix::Zero(users, ch.dims.antennas));
        continue;
      }
      CMatrix g = complex_gaussian(users, ch.dims.antennas, rng);
      const double radius = open_unit(rng) * epsilon;
      g *= radius / g.norm();
      errs.push_back(project_error(g, epsilon, RadiusMode::Frobenius));
    }
  }

  Trajectory traj;
  traj.iterates.reserve(static_cast<std::size_t>(sched.iterations()) + 1);
  traj.iterates.push_back({p, sum_rate(p, ch), errs});

  for (int k = 0; k < sched.iterations(); ++k) {
    // Inner iterates start at the anchor (W^k, E^k); every inner step restarts from the anchor.
    CMatrix hat_analog = p.analog;
    CMatrix eval_analog = p.analog;
    std::vector<CMatrix> hat_digital = p.digital;
    std::vector<CMatrix> hat_errors = errs;

    for (int i = 0; i < sched.inner(); ++i) {
      const bool alternating = options.inner == InnerUpdate::Alternating;
      const Precoders prev{alternating ? eval_analog : hat_analog, hat_digital, c};
      RateGradients g;
      CMatrix next_analog;
      if (alternating) {
        const auto ga = rate_gradients(prev, ch, hat_errors, {.analog = true, .digital = false, .error = false});
        next_analog = p.analog + sched.analog(k, i) * ga.analog;
        const Precoders fresh{project_analog(next_analog, c), hat_digital, c};
        g = rate_gradients(fresh, ch, hat_errors, {.analog = false, .digital = true, .error = true});
        eval_analog = fresh.analog;
      } else {
        g = rate_gradients(prev, ch, hat_errors, {.analog = true, .digital = true, .error = true});
        next_analog = p.analog + sched.analog(k, i) * g.analog;
      }
      hat_analog = std::move(next_analog);
      for (std::size_t b = 0; b < nb; ++b) {
        const int bi = static_cast<int>(b);
        hat_digital[b] = p.digital[b] + sched.digital(k, i, bi) * g.digital[b];
        hat_errors[b] = errs[b] - sched.error(k, i, bi) * g.error[b];
      }
    }

    Precoders next;
    next.constraint = c;
    next.analog = project_analog(hat_analog, c);
    next.digital = project_digital(hat_digital, next.analog, users);
    for (std::size_t b = 0; b < nb; ++b) errs[b] = project_error(hat_errors[b], epsilon, options.radius);
    p = std::move(next);
    traj.iterates.push_back({p, sum_rate(p, ch), errs});
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Fully digital reference

BaselineResult fully_digital(const ChannelSet& ch, int iterations, double step) {
  check_channel(ch);
  require(iterations >= 0, ErrorCode::InvalidArgument, "iterations must be >= 0");
  require(std::isfinite(step) && step >= 0.0, ErrorCode::InvalidArgument, "step must be >= 0");
  const int users = ch.dims.users;

  Precoders p;
  p.analog = identity(ch.dims.antennas);
  std::vector<CMatrix> mf;
  mf.reserve(ch.bands.size());
  for (const auto& h : ch.bands) mf.push_back(h.adjoint());
  p.digital = project_digital(mf, p.analog, users);

  for (int k = 0; k < iterations; ++k) {
    auto gd = rate_gradients(p, ch, {}, {.analog = false, .digital = true, .error = false});
    for (std::size_t b = 0; b < p.digital.size(); ++b) p.digital[b] += step * gd.digital[b];
    p.digital = project_digital(p.digital, p.analog, users);
  }
  const double rate = sum_rate(p, ch);
  return {std::move(p), rate};
}

}  // namespace hprec
