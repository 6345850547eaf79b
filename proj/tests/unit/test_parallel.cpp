#include <stdexcept>

#include <gtest/gtest.h>

#include "hprec/parallel.hpp"

namespace hprec {
namespace {

TEST(ParallelMap, OrderIndependentOfThreads) {
  const auto fn = [](std::size_t i) { return static_cast<double>(i * i) + 0.5; };
  const auto serial = parallel_map(37, 1, fn);
  ASSERT_EQ(serial.size(), 37u);
  for (std::size_t i = 0; i < 37; ++i) EXPECT_EQ(serial[i], fn(i));
  for (int t : {2, 3, 8, 64}) EXPECT_EQ(parallel_map(37, t, fn), serial);
}

TEST(ParallelMap, EmptyAndExceptions) {
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t) { return 1.0; }).empty());
  EXPECT_THROW(parallel_map(10, 3,
                            [](std::size_t i) -> double {
                              if (i == 7) throw std::runtime_error("boom");
                              return 0.0;
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace hprec
