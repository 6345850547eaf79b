#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hprec/admm.hpp"
#include "hprec/channel.hpp"
#include "hprec/optim.hpp"

namespace hprec {

enum class OptimizerKind { Adam, PlainSgd };

/// How hyper-gradients are obtained. Only central finite differences over
/// the schedule entries are available.
enum class GradMode { CentralFiniteDifference };

struct TrainConfig {
  int epochs = 50;
  int batch_size = 100;
  double learning_rate = 1e-2;
  int iterations = 5;  // K (or I_max for ADMM)
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  GradMode grad_mode = GradMode::CentralFiniteDifference;
  double fd_step = 1e-4;
  int threads = 1;

  void validate(std::size_t dataset_size) const;
};

/// Smallest value a trained step size may take.
inline constexpr double kPositivityFloor = 1e-8;

struct AdamState {
  std::vector<double> first;
  std::vector<double> second;
  long step = 0;
};

/// One bias-corrected Adam update, in place, followed by the positivity
/// floor. Throws ShapeMismatch if the sizes disagree.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, double lr, double beta1,
               double beta2, double eps);

/// params -= lr * grad, then the positivity floor.
void sgd_step(std::span<double> params, std::span<const double> grad, double lr);

using LossFn = std::function<double(std::span<const double>)>;

/// Central differences g_i = (loss(x + h e_i) - loss(x - h e_i)) / 2h.
/// Throws StepTooLarge unless every entry exceeds h.
std::vector<double> hyper_gradient(const LossFn& loss, std::span<const double> values, double fd_step);

/// Mean over channels of pga_loss of the K-iteration trajectory.
double batch_loss_pga(std::span<const ChannelSet> batch, const PgaSchedule& sched, AnalogConstraint c,
                      std::uint64_t seed, int threads = 1);

/// Mean over channels of robust_loss at the final PCMP iterate, with the
/// error set drawn once per call from `es_seed` (zero pattern only when
/// epsilon is 0).
double batch_loss_pcmp(std::span<const ChannelSet> batch, const PcmpSchedule& sched, double epsilon,
                       std::uint64_t es_seed, int n_e, AnalogConstraint c, std::uint64_t seed,
                       PcmpOptions options = {}, int threads = 1);

/// Mean over channels of the negative final (power-projected) ADMM rate.
double batch_loss_admm(std::span<const ChannelSet> batch, const AdmmParams& params, std::uint64_t seed,
                       MultiplierMode mode = MultiplierMode::Descent, int threads = 1);

template <class Schedule>
struct TrainResult {
  Schedule schedule;
  std::vector<double> epoch_losses;  // mean training loss per epoch, measured before each update
};

TrainResult<PgaSchedule> train_pga(const ChannelDataset& ds, const TrainConfig& cfg, AnalogConstraint c,
                                   const PgaSchedule& init);

TrainResult<PcmpSchedule> train_pcmp(const ChannelDataset& ds, const TrainConfig& cfg, double epsilon, int n_e,
                                     AnalogConstraint c, const PcmpSchedule& init, PcmpOptions options = {});

TrainResult<AdmmParams> train_admm(const ChannelDataset& ds, const TrainConfig& cfg, const AdmmParams& init,
                                   MultiplierMode mode = MultiplierMode::Descent);

}  // namespace hprec
