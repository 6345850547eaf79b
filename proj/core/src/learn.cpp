#include "hprec/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hprec/error.hpp"
#include "hprec/parallel.hpp"
#include "hprec/random.hpp"

namespace hprec {

void TrainConfig::validate(std::size_t dataset_size) const {
  require(epochs >= 0, ErrorCode::InvalidArgument, "epochs must be >= 0");
  require(batch_size >= 1 && static_cast<std::size_t>(batch_size) <= dataset_size, ErrorCode::InvalidArgument,
          "batch size must lie in [1, dataset size]");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), ErrorCode::InvalidArgument, "learning rate must be > 0");
  require(fd_step > 0.0 && std::isfinite(fd_step), ErrorCode::InvalidArgument, "fd_step must be > 0");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0,
          ErrorCode::InvalidArgument, "Adam betas must lie in [0, 1)");
  require(adam_eps > 0.0, ErrorCode::InvalidArgument, "Adam eps must be > 0");
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
  require(params.size() == grad.size(), ErrorCode::ShapeMismatch, "adam_step: gradient shape differs");
  if (state.first.empty() && state.second.empty()) {
    state.first.assign(params.size(), 0.0);
    state.second.assign(params.size(), 0.0);
  }
  require(state.first.size() == params.size() && state.second.size() == params.size(), ErrorCode::ShapeMismatch,
          "adam_step: state shape differs");
  ++state.step;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.first[i] = beta1 * state.first[i] + (1.0 - beta1) * grad[i];
    state.second[i] = beta2 * state.second[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double m_hat = state.first[i] / c1;
    const double v_hat = state.second[i] / c2;
    params[i] = std::max(kPositivityFloor, params[i] - lr * m_hat / (std::sqrt(v_hat) + eps));
  }
}

void sgd_step(std::span<double> params, std::span<const double> grad, double lr) {
  require(params.size() == grad.size(), ErrorCode::ShapeMismatch, "sgd_step: gradient shape differs");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = std::max(kPositivityFloor, params[i] - lr * grad[i]);
}

namespace {

// Per-entry probe widths: the configured step, shrunk so that no probe
// crosses zero for entries that have drifted close to the floor.
std::vector<double> probe_widths(std::span<const double> values, double fd_step) {
  std::vector<double> h(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) h[i] = std::min(fd_step, 0.5 * values[i]);
  return h;
}

std::vector<double> central_differences(const LossFn& loss, std::span<const double> values,
                                        std::span<const double> widths) {
  std::vector<double> probe(values.begin(), values.end());
  std::vector<double> grad(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = widths[i];
    probe[i] = values[i] + h;
    const double up = loss(probe);
    probe[i] = values[i] - h;
    const double down = loss(probe);
    probe[i] = values[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

template <class Schedule>
Schedule with_values(const Schedule& shape, std::span<const double> values) {
  Schedule s = shape;
  std::copy(values.begin(), values.end(), s.values().begin());
  return s;
}

std::vector<ChannelSet> gather(const ChannelDataset& ds, std::span<const std::size_t> idx) {
  std::vector<ChannelSet> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(ds.realizations[i]);
  return out;
}

// Shared epoch/batch loop. `batch_loss(batch, values, step_seed)` evaluates
// the mean loss; the same step_seed is used for every probe of one update.
template <class Schedule, class BatchLoss>
TrainResult<Schedule> train_loop(const ChannelDataset& ds, const TrainConfig& cfg, const Schedule& init,
                                 BatchLoss&& batch_loss) {
  if (ds.realizations.empty()) fail(ErrorCode::EmptyDataset, "training set is empty");
  if (!ds.normalized()) fail(ErrorCode::NotNormalized, "training set must be normalized");
  cfg.validate(ds.size());

  TrainResult<Schedule> result{init, {}};
  std::vector<double> values(init.values().begin(), init.values().end());
  AdamState adam;

  std::vector<std::size_t> order(ds.size());
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = make_rng(cfg.seed, {0x5eedULL, static_cast<std::uint64_t>(epoch)});
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double weighted = 0.0;
    std::uint64_t q = 0;
    for (std::size_t start = 0; start < order.size(); start += bs, ++q) {
      const auto count = std::min(bs, order.size() - start);
      const auto batch = gather(ds, std::span<const std::size_t>(order).subspan(start, count));
      const std::uint64_t step_seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(epoch), q});
      const LossFn loss = [&](std::span<const double> v) { return batch_loss(batch, v, step_seed); };

      weighted += loss(values) * static_cast<double>(count);
      const auto grad = central_differences(loss, values, probe_widths(values, cfg.fd_step));
      if (cfg.optimizer == OptimizerKind::Adam) {
        adam_step(values, grad, adam, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
      } else {
        sgd_step(values, grad, cfg.learning_rate);
      }
    }
    result.epoch_losses.push_back(weighted / static_cast<double>(ds.size()));
  }
  result.schedule = with_values(init, values);
  return result;
}

}  // namespace

std::vector<double> hyper_gradient(const LossFn& loss, std::span<const double> values, double fd_step) {
  require(fd_step > 0.0, ErrorCode::InvalidArgument, "fd_step must be > 0");
  for (double v : values) {
    if (!(v > fd_step)) fail(ErrorCode::StepTooLarge, "every schedule entry must exceed fd_step");
  }
  const std::vector<double> widths(values.size(), fd_step);
  return central_differences(loss, values, widths);
}

double batch_loss_pga(std::span<const ChannelSet> batch, const PgaSchedule& sched, AnalogConstraint c,
                      std::uint64_t seed, int threads) {
  if (batch.empty()) fail(ErrorCode::EmptyBatch, "batch is empty");
  const auto losses = parallel_map(batch.size(), threads, [&](std::size_t i) {
    const auto rates = pga_run(batch[i], sched, c, seed).rates();
    return pga_loss(std::span<const double>(rates).subspan(1));
  });
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(batch.size());
}

double batch_loss_pcmp(std::span<const ChannelSet> batch, const PcmpSchedule& sched, double epsilon,
                       std::uint64_t es_seed, int n_e, AnalogConstraint c, std::uint64_t seed, PcmpOptions options,
                       int threads) {
  if (batch.empty()) fail(ErrorCode::EmptyBatch, "batch is empty");
  const SystemDims& dims = batch.front().dims;
  const ErrorSet es = epsilon > 0.0
                          ? sample_error_set(dims, epsilon, n_e, es_seed)
                          : ErrorSet{dims, 0.0, {std::vector<CMatrix>(static_cast<std::size_t>(dims.bands),
                                                                      CMatrix::Zero(dims.users, dims.antennas))}};
  const auto losses = parallel_map(batch.size(), threads, [&](std::size_t i) {
    const auto traj = pcmp_run(batch[i], sched, epsilon, c, seed, options);
    return robust_loss(traj.final().precoders, batch[i], es);
  });
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(batch.size());
}

double batch_loss_admm(std::span<const ChannelSet> batch, const AdmmParams& params, std::uint64_t seed,
                       MultiplierMode mode, int threads) {
  if (batch.empty()) fail(ErrorCode::EmptyBatch, "batch is empty");
  const auto losses = parallel_map(batch.size(), threads, [&](std::size_t i) {
    return -admm_run(batch[i], params, seed, mode).final_rate;
  });
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(batch.size());
}

TrainResult<PgaSchedule> train_pga(const ChannelDataset& ds, const TrainConfig& cfg, AnalogConstraint c,
                                   const PgaSchedule& init) {
  return train_loop(ds, cfg, init, [&](std::span<const ChannelSet> batch, std::span<const double> v, std::uint64_t s) {
    return batch_loss_pga(batch, with_values(init, v), c, s, cfg.threads);
  });
}

TrainResult<PcmpSchedule> train_pcmp(const ChannelDataset& ds, const TrainConfig& cfg, double epsilon, int n_e,
                                     AnalogConstraint c, const PcmpSchedule& init, PcmpOptions options) {
  return train_loop(ds, cfg, init, [&](std::span<const ChannelSet> batch, std::span<const double> v, std::uint64_t s) {
    return batch_loss_pcmp(batch, with_values(init, v), epsilon, derive_seed(s, {0xe770ULL}), n_e, c, s, options,
                           cfg.threads);
  });
}

TrainResult<AdmmParams> train_admm(const ChannelDataset& ds, const TrainConfig& cfg, const AdmmParams& init,
                                   MultiplierMode mode) {
  if (!ds.realizations.empty() && ds.dims.bands != 1) fail(ErrorCode::DimensionMismatch, "ADMM training needs B = 1");
  return train_loop(ds, cfg, init, [&](std::span<const ChannelSet> batch, std::span<const double> v, std::uint64_t s) {
    return batch_loss_admm(batch, with_values(init, v), s, mode, cfg.threads);
  });
}

}  // namespace hprec
