#include "ltem/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltem/kernels.hpp"

namespace ltem {

namespace {

struct EmState {
  std::vector<double> weights, means, stds;
};

EmState init_em(const std::vector<double>& sorted, int k, double pooled_std,
                SeededGenerator& gen) {
  EmState s;
  s.weights.assign(k, 1.0 / k);
  s.stds.assign(k, pooled_std);
  s.means.resize(k);
  const std::size_t n = sorted.size();
  for (int j = 0; j < k; ++j) {
    double q = (j + 0.5) / k;
    s.means[j] = sorted[static_cast<std::size_t>(q * (n - 1))];
  }
  // Duplicate quantiles (heavily repeated values) would start two components
  // on top of each other; jitter them apart deterministically.
  for (int j = 1; j < k; ++j) {
    if (s.means[j] <= s.means[j - 1]) {
      double span = std::max(1e-6, sorted.back() - sorted.front());
      s.means[j] = s.means[j - 1] + span * 1e-3 * (1.0 + gen.uniform01());
    }
  }
  return s;
}

// One EM pass at fixed k. Returns false when a component starved (its
// responsibility mass fell below one sample) and the caller should retry
// with fewer components.
bool run_em(const std::vector<double>& xs, int k, const GmmOptions& options,
            SeededGenerator& gen, GmmFitResult& out) {
  const double n = static_cast<double>(xs.size());
  auto [sum, sumsq] = kernels::sum_sumsq(xs);
  double mean = sum / n;
  double pooled_var = std::max(0.0, sumsq / n - mean * mean);
  double pooled_std = std::max(options.eval_std_floor, std::sqrt(pooled_var));

  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  EmState s = init_em(sorted, k, pooled_std, gen);

  const bool constrained = options.fixed_offsets;
  std::span<const double> offsets;
  if (constrained) offsets = std::span<const double>(options.offsets.data(), k);

  out.ll_history.clear();
  out.converged = false;
  double prev_ll = 0.0;
  std::vector<double> eval_stds(k);

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (int j = 0; j < k; ++j) eval_stds[j] = std::max(s.stds[j], options.eval_std_floor);
    kernels::EmAccum acc =
        kernels::em_accumulate(xs, s.weights, s.means, eval_stds, offsets);
    out.iterations = iter;
    out.log_likelihood = acc.log_likelihood;
    out.ll_history.push_back(acc.log_likelihood);

    for (int j = 0; j < k; ++j) {
      if (acc.resp_mass[j] < 1.0) return false;  // degenerate component
    }

    // M-step
    if (constrained) {
      double mu1 = std::accumulate(acc.resp_shift.begin(), acc.resp_shift.end(), 0.0) / n;
      for (int j = 0; j < k; ++j) s.means[j] = mu1 + options.offsets[j];
    } else {
      for (int j = 0; j < k; ++j) s.means[j] = acc.resp_x[j] / acc.resp_mass[j];
    }
    for (int j = 0; j < k; ++j) {
      s.weights[j] = acc.resp_mass[j] / n;
      double var = acc.resp_xx[j] / acc.resp_mass[j] -
                   2.0 * s.means[j] * acc.resp_x[j] / acc.resp_mass[j] +
                   s.means[j] * s.means[j];
      s.stds[j] = std::sqrt(std::max(0.0, var));
    }

    if (iter > 1) {
      double rel = std::abs(acc.log_likelihood - prev_ll) / std::max(1.0, std::abs(prev_ll));
      if (rel < options.tol) {
        out.converged = true;
        break;
      }
    }
    prev_ll = acc.log_likelihood;
  }

  out.components.resize(k);
  for (int j = 0; j < k; ++j) {
    out.components[j] = GaussianComponent{s.weights[j], s.means[j], s.stds[j]};
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) {
              return a.mean_ms < b.mean_ms;
            });
  double wsum = 0.0;
  for (const auto& c : out.components) wsum += c.weight;
  for (auto& c : out.components) c.weight /= wsum;
  out.mu1_ms = out.components.front().mean_ms;
  return true;
}

}  // namespace

GmmFitResult fit_gmm(const SampleSet& samples, int k, const GmmOptions& options,
                     SeededGenerator& gen) {
  if (k < 1) throw FitError("fit_gmm: k must be >= 1");
  if (samples.values.size() < static_cast<std::size_t>(10 * k)) {
    throw FitError("fit_gmm: need at least 10*k samples, have " +
                   std::to_string(samples.values.size()));
  }
  if (options.fixed_offsets && options.offsets.size() < static_cast<std::size_t>(k)) {
    throw FitError("fit_gmm: fixed-offset fit needs k offsets");
  }

  GmmFitResult result;
  for (int kk = k; kk >= 1; --kk) {
    GmmFitResult attempt;
    attempt.removed_components = result.removed_components;
    if (run_em(samples.values, kk, options, gen, attempt)) {
      return attempt;
    }
    result.removed_components += 1;
  }
  throw FitError("fit_gmm: all components degenerate");
}

double PolyFit::operator()(double x) const {
  double y = 0.0;
  for (std::size_t i = coefficients.size(); i-- > 0;) y = y * x + coefficients[i];
  return y;
}

PolyFit fit_poly(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  if (degree != 1 && degree != 2) throw FitError("fit_poly: degree must be 1 or 2");
  if (xs.size() != ys.size()) throw FitError("fit_poly: x/y size mismatch");

  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < static_cast<std::size_t>(degree + 1)) {
    throw FitError("insufficient support: need more than " + std::to_string(degree) +
                   " distinct x values");
  }

  // Normal equations in extended precision; for degree <= 2 the Gram matrix
  // with CSQ-scale x (~30) is mildly ill-conditioned in plain double.
  const int m = degree + 1;
  long double ata[3][3] = {};
  long double aty[3] = {};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    long double pow_x[3] = {1.0L, xs[i], static_cast<long double>(xs[i]) * xs[i]};
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) ata[r][c] += pow_x[r] * pow_x[c];
      aty[r] += pow_x[r] * ys[i];
    }
  }

  // Gaussian elimination with partial pivoting on the m x m system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(static_cast<double>(ata[perm[r]][col])) >
          std::abs(static_cast<double>(ata[perm[pivot]][col]))) {
        pivot = r;
      }
    }
    std::swap(perm[col], perm[pivot]);
    if (ata[perm[col]][col] == 0.0L) {
      throw FitError("insufficient support: singular design matrix");
    }
    for (int r = col + 1; r < m; ++r) {
      long double f = ata[perm[r]][col] / ata[perm[col]][col];
      for (int c = col; c < m; ++c) ata[perm[r]][c] -= f * ata[perm[col]][c];
      aty[perm[r]] -= f * aty[perm[col]];
    }
  }
  long double coef[3] = {};
  for (int r = m - 1; r >= 0; --r) {
    long double acc = aty[perm[r]];
    for (int c = r + 1; c < m; ++c) acc -= ata[perm[r]][c] * coef[c];
    coef[r] = acc / ata[perm[r]][r];
  }

  PolyFit fit;
  fit.degree = degree;
  fit.coefficients.assign(coef, coef + m);
  long double ss = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    long double r = ys[i] - fit(xs[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(static_cast<double>(ss / xs.size()));
  return fit;
}

AcfResult autocorrelation(const SampleSet& series, int max_lag) {
  const auto& xs = series.values;
  if (max_lag < 0) throw FitError("autocorrelation: max_lag must be >= 0");
  if (xs.size() <= static_cast<std::size_t>(max_lag)) {
    throw FitError("autocorrelation: series shorter than max_lag");
  }
  auto [sum, sumsq] = kernels::sum_sumsq(xs);
  double mean = sum / static_cast<double>(xs.size());

  std::vector<double> raw = kernels::acf_raw(xs, mean, max_lag);
  if (raw[0] <= 0.0) throw FitError("constant series: zero variance");

  AcfResult out;
  out.values.resize(raw.size());
  out.values[0] = 1.0;
  for (std::size_t k = 1; k < raw.size(); ++k) {
    out.values[k] = std::clamp(raw[k] / raw[0], -1.0, 1.0);
  }
  return out;
}

std::optional<int> detect_period(const AcfResult& acf, double threshold) {
  const auto& r = acf.values;
  const int n = acf.max_lag();
  auto local_max = [&](int k) {
    if (k < 1 || k > n) return false;
    if (r[k] < r[k - 1]) return false;
    if (k < n && r[k] < r[k + 1]) return false;
    return true;
  };
  for (int k = 2; k <= n; ++k) {
    if (!local_max(k) || r[k] < threshold) continue;
    bool harmonics_ok = true;
    for (int m = 2 * k; m <= n; m += k) {
      if (!local_max(m) || r[m] < 0.5 * threshold) {
        harmonics_ok = false;
        break;
      }
    }
    if (harmonics_ok) return k;
  }
  return std::nullopt;
}

double loss_rate(std::uint64_t sent, std::uint64_t received) {
  if (sent == 0) throw FitError("loss_rate: no samples");
  if (received > sent) throw FitError("loss_rate: received exceeds sent");
  return static_cast<double>(sent - received) / static_cast<double>(sent);
}

OperatorProfile rebuild_profile(const std::map<int, GmmFitResult>& rtt_fits,
                                const std::map<int, BandwidthPoint>& bw_points,
                                const std::string& name, double loss) {
  if (rtt_fits.size() < 3 || bw_points.size() < 3) {
    throw FitError("insufficient support: need fits at >= 3 distinct CSQ values");
  }
  std::size_t k = rtt_fits.begin()->second.components.size();
  for (const auto& [csq, fit] : rtt_fits) {
    if (fit.components.size() != k) {
      throw FitError("rebuild_profile: inconsistent component counts across CSQs");
    }
  }
  if (k != 4) throw FitError("rebuild_profile: profiles carry exactly 4 components");

  OperatorProfile p;
  p.name = name;
  p.loss_rate = loss;

  std::vector<double> csqs;
  for (const auto& [csq, fit] : rtt_fits) csqs.push_back(csq);

  // Weight fits: one line per component.
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> w;
    for (const auto& [csq, fit] : rtt_fits) w.push_back(fit.components[j].weight);
    PolyFit line = fit_poly(csqs, w, 1);
    p.weight_fits[j] = LinearFit{line.coefficients[0], line.coefficients[1]};
  }

  // Offsets relative to the first peak and per-component stds, averaged.
  for (std::size_t j = 0; j < k; ++j) {
    double off = 0.0, std_sum = 0.0;
    for (const auto& [csq, fit] : rtt_fits) {
      off += fit.components[j].mean_ms - fit.components[0].mean_ms;
      std_sum += fit.components[j].std_ms;
    }
    p.mean_offsets_ms[j] = off / static_cast<double>(rtt_fits.size());
    p.component_stds_ms[j] = std_sum / static_cast<double>(rtt_fits.size());
  }
  p.mean_offsets_ms[0] = 0.0;

  double mu1 = 0.0;
  for (const auto& [csq, fit] : rtt_fits) mu1 += fit.mu1_ms;
  p.default_mu1_ms = mu1 / static_cast<double>(rtt_fits.size());

  // RTT moments from the mixtures: quadratic mean, linear std.
  std::vector<double> rtt_means, rtt_stds;
  for (const auto& [csq, fit] : rtt_fits) {
    auto [m, s] = mixture_moments(fit.components);
    rtt_means.push_back(m);
    rtt_stds.push_back(s);
  }
  PolyFit mean_fit = fit_poly(csqs, rtt_means, 2);
  PolyFit std_fit = fit_poly(csqs, rtt_stds, 1);
  p.rtt_moment_fit.mean_coeffs = {mean_fit.coefficients[0], mean_fit.coefficients[1],
                                  mean_fit.coefficients[2]};
  p.rtt_moment_fit.std_coeffs = {std_fit.coefficients[0], std_fit.coefficients[1]};

  // Bandwidth fits.
  std::vector<double> bw_csqs, bw_means, bw_stds;
  for (const auto& [csq, point] : bw_points) {
    bw_csqs.push_back(csq);
    bw_means.push_back(point.mean_mbps);
    bw_stds.push_back(point.std_mbps);
  }
  PolyFit bw_mean = fit_poly(bw_csqs, bw_means, 1);
  PolyFit bw_std = fit_poly(bw_csqs, bw_stds, 1);
  p.bandwidth_mean_fit = LinearFit{bw_mean.coefficients[0], bw_mean.coefficients[1]};
  p.bandwidth_std_fit = LinearFit{bw_std.coefficients[0], bw_std.coefficients[1]};

  p.validate();
  return p;
}

}  // namespace ltem
