#pragma once

#include <cstdint>
#include <initializer_list>
#include <cmath>
#include <random>
#include <vector>

#include "hprec/matcore.hpp"

namespace hprec {

using Rng = std::mt19937_64;

/// Engine seeded from a base seed plus stream indices, so independent
/// pipeline stages draw from unrelated sequences.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> streams = {}) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto s : streams) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Derived 64-bit seed for a sub-stage.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> streams) {
  Rng rng = make_rng(seed, streams);
  return rng();
}

/// Circularly-symmetric complex Gaussian matrix with unit-variance entries.
inline CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = half(rng);
      const double im = half(rng);
      m(i, j) = cd(re, im);
    }
  }
  return m;
}

/// Uniform draw from the open interval (0, 1).
inline double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0;
  while (x == 0.0) x = u(rng);
  return x;
}

}  // namespace hprec
