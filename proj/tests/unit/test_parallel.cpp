#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>

#include "exitrate/parallel.hpp"

using namespace exitrate;

TEST(Parallel, EveryIndexRunsExactlyOnce) {
  for (std::size_t workers : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); }, workers);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, EmptyRangeIsANoOp) {
  bool touched = false;
  parallel_for(0, [&](std::size_t) { touched = true; }, 4);
  EXPECT_FALSE(touched);
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
    if (i == 57) throw std::runtime_error("boom");
  }, 4), std::runtime_error);
}

TEST(Parallel, WorkerCountHonoursTheEnvironment) {
  setenv("EXITRATE_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  unsetenv("EXITRATE_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(PairwiseSum, AccurateOnLongSums) {
  std::vector<double> v(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 0.1 * static_cast<double>(v.size()), 1e-8);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{2.5}), 2.5);
}
