#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace exitrate {

/// Worker count: EXITRATE_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 = worker_count()).
/// Bodies must write only to their own index, so results never depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

/// Pairwise (cascade) summation; the result depends only on the order of
/// the input, not on how it was produced.
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace exitrate
