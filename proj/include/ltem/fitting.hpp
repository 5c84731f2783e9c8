#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltem/model.hpp"
#include "ltem/rng.hpp"

namespace ltem {

struct SampleSet {
  std::vector<double> values;
  std::string label;
  std::optional<int> csq;
};

// Result of one Gaussian-mixture fit. Weights of a successful fit sum to 1;
// components are ordered by mean. Aggregate-constructible so reconstruction
// inputs can carry arbitrary (e.g. unnormalized) component tables.
struct GmmFitResult {
  std::vector<GaussianComponent> components;
  double mu1_ms = 0.0;  // mean of the first component
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  int removed_components = 0;          // singular components dropped mid-fit
  std::vector<double> ll_history;      // log-likelihood after each iteration
};

struct GmmOptions {
  // Constrain component means to mu1 + offsets (offsets.size() must equal k)
  // and re-estimate only mu1, the weights and the stds.
  bool fixed_offsets = false;
  std::vector<double> offsets;
  double tol = 1e-8;    // relative log-likelihood change
  int max_iter = 500;
  // M-step stds are reported as estimated; density evaluation floors them
  // at this value to avoid singular collapse on quantized samples.
  double eval_std_floor = 1e-3;
};

// Expectation-maximization fit of a k-component Gaussian mixture.
// Initialization is quantile-spaced means, uniform weights, pooled std; the
// generator only breaks ties between duplicate quantiles, so the fit is
// deterministic given data and seed. A component whose responsibility mass
// drops below one sample is removed and the fit restarts with k-1
// (removed_components counts these). Non-convergence is reported via
// `converged`, not an error.
GmmFitResult fit_gmm(const SampleSet& samples, int k, const GmmOptions& options,
                     SeededGenerator& gen);

struct PolyFit {
  int degree = 0;
  std::vector<double> coefficients;  // ascending powers
  double residual_rms = 0.0;

  double operator()(double x) const;
};

// Ordinary least squares for degree 1 or 2. Throws FitError("insufficient
// support") when the distinct-x count does not exceed the degree.
PolyFit fit_poly(const std::vector<double>& xs, const std::vector<double>& ys, int degree);

struct AcfResult {
  std::vector<double> values;  // index = lag; values[0] == 1

  int max_lag() const { return static_cast<int>(values.size()) - 1; }
};

// Biased sample autocorrelation (divisor N), lag 0 normalized to exactly 1.
// Requires series.size() > max_lag and non-zero variance.
AcfResult autocorrelation(const SampleSet& series, int max_lag);

// Smallest lag k >= 2 that is a local maximum with r(k) >= threshold and
// whose integer multiples up to max_lag are local maxima >= threshold/2.
std::optional<int> detect_period(const AcfResult& acf, double threshold = 0.3);

double loss_rate(std::uint64_t sent, std::uint64_t received);

struct BandwidthPoint {
  double mean_mbps = 0.0;
  double std_mbps = 0.0;
};

// Reassembles an OperatorProfile from per-CSQ mixture fits and bandwidth
// statistics: degree-1 fits of each weight and of bandwidth mean/std vs
// CSQ, degree-2/degree-1 fits for the RTT moments, offsets and stds
// averaged across CSQs. Needs >= 3 distinct CSQs in each map.
OperatorProfile rebuild_profile(const std::map<int, GmmFitResult>& rtt_fits,
                                const std::map<int, BandwidthPoint>& bw_points,
                                const std::string& name = "rebuilt",
                                double loss = 0.0035);

}  // namespace ltem
