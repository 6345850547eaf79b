#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/objective.hpp"

namespace hprec {

/// Single-band ADMM iterate. V ~ W_a W_d is the split variable, Y the
/// multiplier (both M x N).
struct AdmmState {
  CMatrix analog;      // M x L
  CMatrix digital;     // L x N
  CMatrix aux;         // V
  CMatrix multiplier;  // Y
};

/// Per-iteration parameters, I_max rows of (lambda, mu, mu_a, mu_d, mu_y).
class AdmmParams {
 public:
  static constexpr int kColumns = 5;
  enum Column { Lambda = 0, Mu = 1, StepAnalog = 2, StepDigital = 3, StepMultiplier = 4 };

  AdmmParams() = default;
  explicit AdmmParams(int iterations, double fill = 0.0);
  AdmmParams(int iterations, double lambda, double mu, double mu_a, double mu_d, double mu_y);

  int iterations() const { return iterations_; }
  double& at(int k, int col) { return values_[index(k, col)]; }
  double at(int k, int col) const { return values_[index(k, col)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t index(int k, int col) const {
    return static_cast<std::size_t>(k) * kColumns + static_cast<std::size_t>(col);
  }

  int iterations_ = 0;
  std::vector<double> values_;
};

/// Sign of the multiplier update. Descent is the form Y - mu_y (W_a W_d - V);
/// Ascent flips it to the usual dual ascent.
enum class MultiplierMode { Descent, Ascent };

/// -log2|I + H W_a W_d W_d^H W_a^H H^H| + lambda (||V||^2 - N)
///   + mu ||W_a W_d - V||^2 + Re Tr[Y^T (W_a W_d - V)]
double lagrangian(const AdmmState& s, const ChannelSet& ch, double lambda, double mu);

/// Derivatives of the Lagrangian w.r.t. W_a and W_d in the unconjugated
/// convention: d/dt L(X + t Delta) = 2 Re Tr[R^T Delta] for returned R. The
/// steepest-descent direction is therefore conj(R).
CMatrix admm_grad_wa(const AdmmState& s, const ChannelSet& ch, double mu);
CMatrix admm_grad_wd(const AdmmState& s, const ChannelSet& ch, double mu);

/// V = mu/(lambda+mu) W_a W_d - 1/(lambda+mu) conj(Y). It zeroes the
/// stationarity residual mu (conj V - conj(W_a W_d)) + Y + lambda conj V.
CMatrix admm_v_update(const AdmmState& s, double lambda, double mu);

/// Residual of the V-stationarity condition above (Frobenius norm).
double admm_v_residual(const AdmmState& s, double lambda, double mu);

CMatrix admm_y_update(const AdmmState& s, double mu_y, MultiplierMode mode = MultiplierMode::Descent);

AdmmState admm_init(const ChannelSet& ch, std::uint64_t seed);

struct AdmmResult {
  AdmmState state;                 // raw final iterate
  Precoders precoders;             // final iterate, power-projected
  std::vector<double> rates;       // unprojected rate of iterates 0..I_max
  double final_rate = 0.0;         // rate of `precoders`
};

AdmmResult admm_run(const ChannelSet& ch, const AdmmParams& params, std::uint64_t seed,
                    MultiplierMode mode = MultiplierMode::Descent);

}  // namespace hprec
