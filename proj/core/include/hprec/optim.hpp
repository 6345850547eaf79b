#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/objective.hpp"

namespace hprec {

/// Per-iteration PGA step sizes, K x (B + 1), row-major. Column 0 is the
/// analog step, columns 1..B the per-band digital steps.
class PgaSchedule {
 public:
  PgaSchedule() = default;
  PgaSchedule(int iterations, int bands, double fill = 0.0);

  int iterations() const { return iterations_; }
  int bands() const { return bands_; }

  double analog(int k) const { return at(k, 0); }
  double digital(int k, int band) const { return at(k, 1 + band); }
  double& at(int k, int col) { return values_[index(k, col)]; }
  double at(int k, int col) const { return values_[index(k, col)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t index(int k, int col) const;

  int iterations_ = 0;
  int bands_ = 0;
  std::vector<double> values_;
};

/// PCMP step sizes, K x i_max x (2B + 1). Index 0 analog, 1..B digital,
/// B+1..2B error.
class PcmpSchedule {
 public:
  PcmpSchedule() = default;
  PcmpSchedule(int iterations, int inner, int bands, double fill = 0.0);

  int iterations() const { return iterations_; }
  int inner() const { return inner_; }
  int bands() const { return bands_; }
  int width() const { return 2 * bands_ + 1; }

  double analog(int k, int i) const { return at(k, i, 0); }
  double digital(int k, int i, int band) const { return at(k, i, 1 + band); }
  double error(int k, int i, int band) const { return at(k, i, 1 + bands_ + band); }
  double& at(int k, int i, int col) { return values_[index(k, i, col)]; }
  double at(int k, int i, int col) const { return values_[index(k, i, col)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Same analog/digital steps as `pga` with a single inner iteration and the
  /// given error step.
  static PcmpSchedule from_pga(const PgaSchedule& pga, double error_step);

 private:
  std::size_t index(int k, int i, int col) const;

  int iterations_ = 0;
  int inner_ = 0;
  int bands_ = 0;
  std::vector<double> values_;
};

struct Iterate {
  Precoders precoders;
  double rate = 0.0;              // nominal sum-rate
  std::vector<CMatrix> errors;    // PCMP only
};

/// Iterates 0 (initialization) through K.
struct Trajectory {
  std::vector<Iterate> iterates;

  std::vector<double> rates() const;
  const Iterate& final() const { return iterates.back(); }
};

enum class RadiusMode { Frobenius, EntrywiseScaled };

/// How the inner CMP step orders its gradient evaluations.
///  - Alternating: analog gradient at the previous inner point, then digital
///    and error gradients at the projected fresh analog iterate.
///  - Simultaneous: all gradients at the previous inner point.
enum class InnerUpdate { Alternating, Simultaneous };

struct PcmpOptions {
  RadiusMode radius = RadiusMode::Frobenius;
  InnerUpdate inner = InnerUpdate::Alternating;
};

/// First L right-singular vectors of (1/B) sum_b H_b.
CMatrix init_analog(const ChannelSet& ch, int rf_chains);

/// Random digital precoders scaled so that the power constraint holds with
/// equality for `analog`.
std::vector<CMatrix> init_digital(const SystemDims& dims, const CMatrix& analog, std::uint64_t seed);

/// Analog initialization (projected onto the constraint set) plus random
/// digital initialization; shared by PGA and PCMP.
Precoders init_precoders(const ChannelSet& ch, AnalogConstraint c, std::uint64_t seed);

/// Unit-modulus normalization for phase shifters (zero maps to 1), identity
/// when unconstrained.
CMatrix project_analog(const CMatrix& w, AnalogConstraint c);

/// Common rescaling so that (1/B) sum_b ||W_a W_d,b||_F^2 = N.
std::vector<CMatrix> project_digital(std::span<const CMatrix> digital, const CMatrix& analog, int users);

/// Shrinks E onto the error ball; never expands.
CMatrix project_error(const CMatrix& e, double epsilon, RadiusMode mode);

Trajectory pga_run(const ChannelSet& ch, const PgaSchedule& sched, AnalogConstraint c, std::uint64_t seed);

Trajectory pcmp_run(const ChannelSet& ch, const PcmpSchedule& sched, double epsilon, AnalogConstraint c,
                    std::uint64_t seed, PcmpOptions options = {});

struct BaselineResult {
  Precoders precoders;
  double rate = 0.0;
};

/// Fully digital reference: W_a = I_M (L = M), digital-only gradient ascent
/// starting from per-band matched filters.
BaselineResult fully_digital(const ChannelSet& ch, int iterations, double step);

inline double fully_digital_baseline(const ChannelSet& ch, int iterations, double step) {
  return fully_digital(ch, iterations, step).rate;
}

}  // namespace hprec
