#include <cmath>
#include <functional>
#include <numbers>

#include <gtest/gtest.h>

#include "hprec/error.hpp"
#include "hprec/objective.hpp"
#include "oracles.hpp"

namespace hprec {
namespace {

using testing::central_diff;
using testing::random_instance;
using testing::rel_err;

ChannelSet scalar_channel(double h) {
  return ChannelSet{SystemDims{1, 1, 1, 1, 1.0}, {CMatrix::Constant(1, 1, h)}, true};
}

Precoders scalar_precoders(double wa, double wd) {
  return Precoders{CMatrix::Constant(1, 1, wa), {CMatrix::Constant(1, 1, wd)}, AnalogConstraint::Unconstrained};
}

TEST(SumRate, ScalarClosedForm) {
  EXPECT_NEAR(sum_rate(scalar_precoders(1, 1), scalar_channel(2)), std::log2(5.0), 1e-12);
  EXPECT_NEAR(sum_rate(scalar_precoders(1, 1), scalar_channel(2)), 2.321928, 1e-6);
}

TEST(SumRate, ZeroDigitalGivesZero) {
  auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 1);
  for (auto& d : in.precoders.digital) d.setZero();
  EXPECT_EQ(sum_rate(in.precoders, in.channel), 0.0);
}

TEST(SumRate, MatchesEigenvalueOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto in = random_instance(SystemDims{2, 2, 2, 3, 0.7}, seed);
    EXPECT_NEAR(sum_rate(in.precoders, in.channel), testing::sum_rate_eig(in.precoders, in.channel), 1e-10);
    EXPECT_NEAR(sum_rate(in.precoders, in.channel, in.errors),
                testing::sum_rate_eig(in.precoders, in.channel, in.errors), 1e-10);
  }
}

TEST(SumRate, RejectsRawChannel) {
  auto ch = scalar_channel(2);
  ch.normalized = false;
  try {
    sum_rate(scalar_precoders(1, 1), ch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
  }
}

TEST(SumRate, DimensionMismatch) {
  auto in = random_instance(SystemDims{1, 2, 2, 3, 1.0}, 3);
  in.precoders.analog = CMatrix::Ones(4, 2);
  try {
    sum_rate(in.precoders, in.channel);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(SumRate, UnitaryInvariance) {
  Rng rng = make_rng(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = random_instance(SystemDims{3, 2, 3, 4, 1.0}, seed);
    const CMatrix u = testing::random_unitary(3, rng);
    Precoders q = in.precoders;
    q.analog = in.precoders.analog * u;
    for (auto& d : q.digital) d = u.adjoint() * d;
    EXPECT_NEAR(sum_rate(q, in.channel), sum_rate(in.precoders, in.channel), 1e-9);
  }
}

TEST(SumRate, ErrorSignSymmetryOnZeroChannel) {
  auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 4);
  for (auto& h : in.channel.bands) h.setZero();
  std::vector<CMatrix> neg;
  for (const auto& e : in.errors) neg.push_back(-e);
  EXPECT_NEAR(sum_rate(in.precoders, in.channel, in.errors), sum_rate(in.precoders, in.channel, neg), 1e-12);
}

// 2 Re <D, Delta> with <A, B> = sum conj(A) .* B.
double contract(const CMatrix& d, const CMatrix& delta) { return 2.0 * real_inner(d, delta); }

TEST(GradAnalog, ZeroDigitalGivesZero) {
  auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 1);
  for (auto& d : in.precoders.digital) d.setZero();
  EXPECT_EQ(grad_analog(in.precoders, in.channel).norm(), 0.0);
}

TEST(GradAnalog, ScalarCase) {
  const CMatrix d = grad_analog(scalar_precoders(1, 1), scalar_channel(1));
  EXPECT_NEAR(2.0 * d(0, 0).real(), 1.0 / std::numbers::ln2, 1e-9);
  const double fd = central_diff([](double t) { return sum_rate(scalar_precoders(1 + t, 1), scalar_channel(1)); });
  EXPECT_NEAR(2.0 * d(0, 0).real(), fd, 1e-6);
  EXPECT_NEAR(fd, 1.442695, 1e-6);
}

TEST(GradDigital, ZeroAnalogGivesZero) {
  auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 1);
  in.precoders.analog.setZero();
  EXPECT_EQ(grad_digital(in.precoders, in.channel, 0).norm(), 0.0);
  EXPECT_EQ(grad_digital(in.precoders, in.channel, 1).norm(), 0.0);
}

TEST(GradDigital, ScalarCase) {
  const CMatrix d = grad_digital(scalar_precoders(1, 1), scalar_channel(1), 0);
  EXPECT_NEAR(2.0 * d(0, 0).real(), 1.442695, 1e-6);
}

TEST(GradError, ZeroDigitalGivesZero) {
  auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 1);
  in.precoders.digital[1].setZero();
  EXPECT_EQ(grad_error(in.precoders, in.channel, in.errors, 1).norm(), 0.0);
}

TEST(GradError, ScalarAtZeroError) {
  // rate = log2(1 + (h + e)^2), d/de at e = 0, h = 2: 2h / (ln2 (1 + h^2)).
  const std::vector<CMatrix> zero{CMatrix::Zero(1, 1)};
  const CMatrix d = grad_error(scalar_precoders(1, 1), scalar_channel(2), zero, 0);
  const double fd = central_diff([](double t) {
    const std::vector<CMatrix> e{CMatrix::Constant(1, 1, t)};
    return sum_rate(scalar_precoders(1, 1), scalar_channel(2), e);
  });
  EXPECT_NEAR(2.0 * d(0, 0).real(), fd, 1e-7);
  EXPECT_NEAR(fd, 4.0 / (5.0 * std::numbers::ln2), 1e-7);
}

// Directional-derivative contract for all three gradient blocks on random
// instances. Each direction is a random complex matrix of the block's shape.
void check_contract(const SystemDims& dims, std::uint64_t seed, int directions, double tol) {
  const auto in = random_instance(dims, seed);
  Rng rng = make_rng(seed, {0xd1});
  const RateGradients g = rate_gradients(in.precoders, in.channel, in.errors, {true, true, true});
  EXPECT_NEAR(g.rate, sum_rate(in.precoders, in.channel, in.errors), 1e-12);

  for (int r = 0; r < directions; ++r) {
    const CMatrix da = complex_gaussian(dims.antennas, dims.rf_chains, rng);
    const double fa = central_diff([&](double t) {
      Precoders q = in.precoders;
      q.analog += t * da;
      return sum_rate(q, in.channel, in.errors);
    });
    EXPECT_LT(rel_err(contract(g.analog, da), fa), tol) << "analog seed " << seed;

    for (int b = 0; b < dims.bands; ++b) {
      const CMatrix dd = complex_gaussian(dims.rf_chains, dims.users, rng);
      const double fd = central_diff([&](double t) {
        Precoders q = in.precoders;
        q.digital[b] += t * dd;
        return sum_rate(q, in.channel, in.errors);
      });
      EXPECT_LT(rel_err(contract(g.digital[b], dd), fd), tol) << "digital seed " << seed;

      const CMatrix de = complex_gaussian(dims.users, dims.antennas, rng);
      const double fe = central_diff([&](double t) {
        auto e = in.errors;
        e[b] += t * de;
        return sum_rate(in.precoders, in.channel, e);
      });
      EXPECT_LT(rel_err(contract(g.error[b], de), fe), tol) << "error seed " << seed;
    }
  }
}

TEST(Gradients, ContractOnReferenceShape) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) check_contract(SystemDims{2, 3, 4, 5, 1.0}, seed, 20, 1e-6);
}

TEST(Gradients, ContractOnRandomShapes) {
  Rng rng = make_rng(77);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    check_contract(testing::random_dims(rng, 5, 5, 5, 5), 1000 + seed, 10, 1e-5);
  }
}

TEST(Gradients, WrappersAgreeWithSharedPass) {
  const auto in = random_instance(SystemDims{3, 2, 2, 4, 1.0}, 8);
  const RateGradients g = rate_gradients(in.precoders, in.channel, in.errors, {true, true, true});
  const RateGradients nominal = rate_gradients(in.precoders, in.channel, {}, {true, true, false});
  EXPECT_TRUE(grad_analog(in.precoders, in.channel).isApprox(nominal.analog, 1e-14));
  for (int b = 0; b < 3; ++b) {
    EXPECT_TRUE(grad_digital(in.precoders, in.channel, b).isApprox(nominal.digital[b], 1e-14));
    EXPECT_TRUE(grad_error(in.precoders, in.channel, in.errors, b).isApprox(g.error[b], 1e-14));
  }
}

TEST(PgaLoss, Examples) {
  const std::vector<double> one{3.0};
  EXPECT_NEAR(pga_loss(one), -std::log(2.0) * 3.0, 1e-12);
  EXPECT_NEAR(pga_loss(one), -2.079442, 1e-6);
  const std::vector<double> zeros(4, 0.0);
  EXPECT_EQ(pga_loss(zeros), 0.0);
  const std::vector<double> three{1.0, 2.0, 3.0};
  const double direct = -(std::log(2.0) * 1.0 + std::log(3.0) * 2.0 + std::log(4.0) * 3.0) / 3.0;
  EXPECT_NEAR(pga_loss(three), direct, 1e-12);
  // The weighted sum is 7.049255 / 3.
  EXPECT_NEAR(pga_loss(three), -2.349752, 1e-6);
}

TEST(PgaLoss, EmptyTrajectory) {
  try {
    pga_loss({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTrajectory);
  }
}

ErrorSet scalar_error_set(std::initializer_list<double> values) {
  ErrorSet es{SystemDims{1, 1, 1, 1, 1.0}, 0.6, {}};
  for (double v : values) es.patterns.push_back({CMatrix::Constant(1, 1, v)});
  return es;
}

TEST(RobustLoss, ZeroOnlySetIsNegativeRate) {
  const auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 2);
  ErrorSet es{in.channel.dims, 0.1, {{CMatrix::Zero(2, 3), CMatrix::Zero(2, 3)}}};
  EXPECT_EQ(robust_loss(in.precoders, in.channel, es), -sum_rate(in.precoders, in.channel));
  EXPECT_EQ(min_rate_over_errors(in.precoders, in.channel, es), sum_rate(in.precoders, in.channel));
}

TEST(RobustLoss, ScalarEnumeration) {
  const auto es = scalar_error_set({0.0, -0.5, 0.5});
  const auto p = scalar_precoders(1, 1);
  const auto ch = scalar_channel(2);
  EXPECT_NEAR(robust_loss(p, ch, es), -std::log2(1.0 + 2.25), 1e-12);
  EXPECT_NEAR(robust_loss(p, ch, es), -1.700440, 1e-6);
  EXPECT_NEAR(min_rate_over_errors(p, ch, es), 1.700440, 1e-6);
}

TEST(RobustLoss, MonotoneInSetInclusion) {
  const auto in = random_instance(SystemDims{2, 2, 2, 3, 1.0}, 6);
  const auto full = sample_error_set(in.channel.dims, 0.3, 10, 4);
  ErrorSet partial = full;
  double prev = -1e300;
  for (std::size_t n = 1; n <= full.patterns.size(); ++n) {
    partial.patterns.assign(full.patterns.begin(), full.patterns.begin() + static_cast<long>(n));
    const double loss = robust_loss(in.precoders, in.channel, partial);
    EXPECT_GE(loss, prev);
    prev = loss;
    EXPECT_LE(min_rate_over_errors(in.precoders, in.channel, partial), sum_rate(in.precoders, in.channel));
  }
}

TEST(RobustLoss, EmptySet) {
  const ErrorSet es{SystemDims{1, 1, 1, 1, 1.0}, 0.1, {}};
  for (auto fn : {+[](const ErrorSet& s) { return robust_loss(scalar_precoders(1, 1), scalar_channel(1), s); },
                  +[](const ErrorSet& s) { return min_rate_over_errors(scalar_precoders(1, 1), scalar_channel(1), s); }}) {
    try {
      fn(es);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptySet);
    }
  }
}

TEST(Precoders, Power) {
  Precoders p{CMatrix::Identity(2, 2), {2.0 * CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)},
              AnalogConstraint::Unconstrained};
  EXPECT_DOUBLE_EQ(p.power(), 4.0);
}

}  // namespace
}  // namespace hprec
