#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ltem::kernels {

// Per-iteration EM sufficient statistics for a k-component 1-D Gaussian
// mixture. resp_shift is only filled when `offsets` is non-empty (the
// fixed-offset variant, where mu1 is the single free location parameter).
struct EmAccum {
  double log_likelihood = 0.0;
  std::vector<double> resp_mass;   // sum_i r_ik
  std::vector<double> resp_x;      // sum_i r_ik * x_i
  std::vector<double> resp_xx;     // sum_i r_ik * x_i^2
  std::vector<double> resp_shift;  // sum_i r_ik * (x_i - offset_k)
};

// Fixed block size for the parallel reductions. Partial sums are produced
// per block and folded in block order, so the result is bit-identical for
// any thread count (including one).
inline constexpr std::size_t kBlockSize = 8192;

// E-step accumulation over all samples. `eval_stds` are the stds used for
// density evaluation (already floored by the caller). Parallel over blocks.
EmAccum em_accumulate(std::span<const double> xs, std::span<const double> weights,
                      std::span<const double> means, std::span<const double> eval_stds,
                      std::span<const double> offsets);

// Raw autocovariance sums around a precomputed mean: out[k] = sum_t
// (x_t - mean)(x_{t+k} - mean) for k = 0..max_lag. Parallel over lags; each
// lag's inner sum runs in index order, so results match the serial
// reference bit for bit.
std::vector<double> acf_raw(std::span<const double> xs, double mean, int max_lag);

// (sum, sum of squares) with the same blocked, thread-count-independent
// summation as the EM kernel.
std::pair<double, double> sum_sumsq(std::span<const double> xs);

namespace serial {
// Plain single-loop references, kept for testing and benchmarking the
// parallel kernels against.
EmAccum em_accumulate(std::span<const double> xs, std::span<const double> weights,
                      std::span<const double> means, std::span<const double> eval_stds,
                      std::span<const double> offsets);
std::vector<double> acf_raw(std::span<const double> xs, double mean, int max_lag);
std::pair<double, double> sum_sumsq(std::span<const double> xs);
}  // namespace serial

}  // namespace ltem::kernels
