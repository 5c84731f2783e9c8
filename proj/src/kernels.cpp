#include "ltem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ltem::kernels {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// Scratch shared by both the serial reference and the per-block workers.
struct SampleAccum {
  double loglik = 0.0;
  std::vector<double> mass, sx, sxx, shift;

  explicit SampleAccum(std::size_t k, bool with_shift)
      : mass(k, 0.0), sx(k, 0.0), sxx(k, 0.0), shift(with_shift ? k : 0, 0.0) {}

  void add_range(std::span<const double> xs, std::size_t begin, std::size_t end,
                 std::span<const double> weights, std::span<const double> means,
                 std::span<const double> eval_stds, std::span<const double> offsets) {
    const std::size_t k = weights.size();
    std::vector<double> logw(k), logs(k), p(k);
    for (std::size_t j = 0; j < k; ++j) {
      logw[j] = weights[j] > 0.0 ? std::log(weights[j])
                                 : -std::numeric_limits<double>::infinity();
      logs[j] = std::log(eval_stds[j]);
    }
    for (std::size_t i = begin; i < end; ++i) {
      const double x = xs[i];
      double lmax = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        double z = (x - means[j]) / eval_stds[j];
        p[j] = logw[j] - 0.5 * z * z - logs[j] - 0.5 * kLogTwoPi;
        lmax = std::max(lmax, p[j]);
      }
      double denom = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        p[j] = std::exp(p[j] - lmax);
        denom += p[j];
      }
      loglik += lmax + std::log(denom);
      for (std::size_t j = 0; j < k; ++j) {
        double r = p[j] / denom;
        mass[j] += r;
        sx[j] += r * x;
        sxx[j] += r * x * x;
        if (!shift.empty()) shift[j] += r * (x - offsets[j]);
      }
    }
  }

  void fold_into(EmAccum& out) const {
    out.log_likelihood += loglik;
    for (std::size_t j = 0; j < mass.size(); ++j) {
      out.resp_mass[j] += mass[j];
      out.resp_x[j] += sx[j];
      out.resp_xx[j] += sxx[j];
      if (!shift.empty()) out.resp_shift[j] += shift[j];
    }
  }
};

EmAccum make_result(std::size_t k, bool with_shift) {
  EmAccum out;
  out.resp_mass.assign(k, 0.0);
  out.resp_x.assign(k, 0.0);
  out.resp_xx.assign(k, 0.0);
  if (with_shift) out.resp_shift.assign(k, 0.0);
  return out;
}

}  // namespace

EmAccum em_accumulate(std::span<const double> xs, std::span<const double> weights,
                      std::span<const double> means, std::span<const double> eval_stds,
                      std::span<const double> offsets) {
  const std::size_t k = weights.size();
  const bool with_shift = !offsets.empty();
  const std::size_t n = xs.size();
  const std::size_t nblocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<SampleAccum> partial(nblocks, SampleAccum(k, with_shift));

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    std::size_t end = std::min(n, begin + kBlockSize);
    partial[b].add_range(xs, begin, end, weights, means, eval_stds, offsets);
  }

  EmAccum out = make_result(k, with_shift);
  for (const auto& p : partial) p.fold_into(out);
  return out;
}

std::vector<double> acf_raw(std::span<const double> xs, double mean, int max_lag) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t lag = 0; lag <= max_lag; ++lag) {
    double sum = 0.0;
    for (std::ptrdiff_t t = 0; t + lag < n; ++t) {
      sum += (xs[t] - mean) * (xs[t + lag] - mean);
    }
    out[lag] = sum;
  }
  return out;
}

std::pair<double, double> sum_sumsq(std::span<const double> xs) {
  const std::size_t n = xs.size();
  const std::size_t nblocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::pair<double, double>> partial(nblocks, {0.0, 0.0});

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    std::size_t end = std::min(n, begin + kBlockSize);
    double s = 0.0, ss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      s += xs[i];
      ss += xs[i] * xs[i];
    }
    partial[b] = {s, ss};
  }

  double s = 0.0, ss = 0.0;
  for (const auto& [ps, pss] : partial) {
    s += ps;
    ss += pss;
  }
  return {s, ss};
}

namespace serial {

EmAccum em_accumulate(std::span<const double> xs, std::span<const double> weights,
                      std::span<const double> means, std::span<const double> eval_stds,
                      std::span<const double> offsets) {
  const bool with_shift = !offsets.empty();
  SampleAccum acc(weights.size(), with_shift);
  acc.add_range(xs, 0, xs.size(), weights, means, eval_stds, offsets);
  EmAccum out = make_result(weights.size(), with_shift);
  acc.fold_into(out);
  return out;
}

std::vector<double> acf_raw(std::span<const double> xs, double mean, int max_lag) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (std::ptrdiff_t lag = 0; lag <= max_lag; ++lag) {
    double sum = 0.0;
    for (std::ptrdiff_t t = 0; t + lag < n; ++t) {
      sum += (xs[t] - mean) * (xs[t + lag] - mean);
    }
    out[lag] = sum;
  }
  return out;
}

std::pair<double, double> sum_sumsq(std::span<const double> xs) {
  double s = 0.0, ss = 0.0;
  for (double x : xs) {
    s += x;
    ss += x * x;
  }
  return {s, ss};
}

}  // namespace serial

}  // namespace ltem::kernels
