#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "hprec/matcore.hpp"

namespace hprec {

/// Problem sizes: bands B, users N, RF chains L, antennas M, noise variance.
struct SystemDims {
  int bands = 1;
  int users = 1;
  int rf_chains = 1;
  int antennas = 1;
  double noise_var = 1.0;

  /// Throws InvalidArgument unless B, N >= 1, 1 <= L <= M and noise_var > 0.
  void validate() const;

  bool same_shape(const SystemDims& o) const {
    return bands == o.bands && users == o.users && rf_chains == o.rf_chains && antennas == o.antennas;
  }
};

/// One channel realization: B sub-channels, each N x M.
struct ChannelSet {
  SystemDims dims;
  std::vector<CMatrix> bands;
  bool normalized = false;

  void validate() const;
};

struct ChannelDataset {
  SystemDims dims;
  std::vector<ChannelSet> realizations;
  std::uint64_t seed = 0;

  std::size_t size() const { return realizations.size(); }
  bool normalized() const { return !realizations.empty() && realizations.front().normalized; }
};

/// A finite set of per-band perturbations. Entry 0 is always all-zero.
struct ErrorSet {
  SystemDims dims;
  double epsilon = 0.0;
  std::vector<std::vector<CMatrix>> patterns;
};

ChannelDataset gen_rayleigh(const SystemDims& dims, int count, std::uint64_t seed);

/// Scales every band by sqrt(1 / (N sigma^2)). Throws AlreadyNormalized.
ChannelSet normalize(const ChannelSet& cs);
ChannelDataset normalize(const ChannelDataset& ds);

/// Replaces the noise variance of raw channels, e.g. for an SNR sweep.
ChannelDataset with_noise_var(ChannelDataset ds, double noise_var);

/// The on-disk format carries no RF-chain count; loaded datasets default to
/// L = M and callers set the working L here.
ChannelDataset with_rf_chains(ChannelDataset ds, int rf_chains);

ErrorSet sample_error_set(const SystemDims& dims, double epsilon, int n_e, std::uint64_t seed);

/// Binary "HPCH" v1 format, little-endian.
void save_dataset(const ChannelDataset& ds, const std::filesystem::path& path);
ChannelDataset load_dataset(const std::filesystem::path& path);

/// First train_count realizations go to train, the rest to test.
std::pair<ChannelDataset, ChannelDataset> split(const ChannelDataset& ds, int train_count);

}  // namespace hprec
