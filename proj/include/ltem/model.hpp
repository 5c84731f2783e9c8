#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltem/errors.hpp"
#include "ltem/rng.hpp"

namespace ltem {

// Cadence of generated series when mapped onto wall-clock time: one RTT
// probe every 50 ms, one bandwidth measurement per second.
inline constexpr double kRttSamplePeriodMs = 50.0;
inline constexpr double kBandwidthSamplePeriodMs = 1000.0;

// Modem link-quality indicator, 0..31. The built-in fits are backed by data
// covering 10..31 only; lower values are constructible but extrapolate.
class CsqValue {
 public:
  explicit CsqValue(int value);

  int value() const { return value_; }
  bool extrapolated() const { return value_ < 10; }

 private:
  int value_;
};

// Affine CSQ -> RSSI map: 0 -> -113 dBm, 31 -> -51 dBm, 2 dBm per step.
int csq_to_rssi_dbm(CsqValue csq);

struct GaussianComponent {
  double weight = 0.0;  // in [0, 1]
  double mean_ms = 0.0;
  double std_ms = 0.0;
};

// Four-component Gaussian mixture for link-layer RTT at one CSQ.
// Construction enforces: weights in [0,1] summing to 1 (within 1e-9 before
// exact renormalization), stds >= 0, means strictly increasing.
struct RttMixtureModel {
  std::vector<GaussianComponent> components;  // exactly 4, ordered by mean
  double mu1_ms = 0.0;                        // location of the first peak
  std::optional<int> source_csq;
};

RttMixtureModel make_rtt_mixture(std::vector<GaussianComponent> components,
                                 double mu1_ms,
                                 std::optional<int> source_csq = std::nullopt);

// y = intercept + slope * x
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;

  double operator()(double x) const { return intercept + slope * x; }
};

// Direct moment fits: mean is quadratic in CSQ, std linear (clamped at 0,
// the linear fit crosses zero just below CSQ 31).
struct RttMomentModel {
  std::array<double, 3> mean_coeffs{};  // c0 + c1*csq + c2*csq^2, ms
  std::array<double, 2> std_coeffs{};   // d0 + d1*csq, ms
};

std::pair<double, double> rtt_moments(const RttMomentModel& model, CsqValue csq);

// One-second downlink bandwidth at one CSQ: Gaussian truncated to >= 0.
// mean/std are the untruncated fit parameters, clamped to >= 0.
struct BandwidthModel {
  double mean_mbps = 0.0;
  double std_mbps = 0.0;
  std::optional<int> source_csq;
};

// Everything needed to instantiate the generative models for one operator.
struct OperatorProfile {
  std::string name;
  std::array<LinearFit, 4> weight_fits{};       // w_i = a_i*csq + b_i
  std::array<double, 4> mean_offsets_ms{};      // [0] == 0, strictly increasing
  std::array<double, 4> component_stds_ms{};
  double default_mu1_ms = 0.0;
  LinearFit bandwidth_mean_fit{};               // Mbps
  LinearFit bandwidth_std_fit{};                // Mbps
  RttMomentModel rtt_moment_fit{};
  double loss_rate = 0.0;

  void validate() const;  // throws ModelError on invariant violation
};

// Built-in profile for operator T (measured weight/offset/std table, moment
// fits, bandwidth fits, 0.35% loss ceiling).
const OperatorProfile& profile_t();

// Raw weight-fit evaluations a_i*csq + b_i, unclamped and unnormalized.
std::array<double, 4> evaluate_weight_fits(const OperatorProfile& profile, CsqValue csq);

// Mixture at a CSQ: raw weights clamped at 0 and renormalized to sum 1,
// means = mu1 + offsets, stds from the profile. Throws ModelError when all
// raw weights are <= 0 ("degenerate mixture").
RttMixtureModel rtt_mixture_params(const OperatorProfile& profile, CsqValue csq,
                                   std::optional<double> mu1_ms = std::nullopt);

BandwidthModel bandwidth_params(const OperatorProfile& profile, CsqValue csq);

// Analytic moments of a Gaussian mixture; the statistical oracle for the
// sampler. Returns (mean, std).
std::pair<double, double> mixture_moments(const std::vector<GaussianComponent>& components);
std::pair<double, double> mixture_moments(const RttMixtureModel& mixture);

// One draw from an arbitrary component list: component picked by weight,
// then a normal draw. No truncation.
double sample_mixture_once(const std::vector<GaussianComponent>& components,
                           SeededGenerator& gen);

// n i.i.d. RTT draws; negative values are redrawn (physical RTT >= 0).
std::vector<double> sample_rtt_series(const RttMixtureModel& mixture, std::size_t n,
                                      SeededGenerator& gen);

// One truncated draw / n i.i.d. truncated draws: normal(mean, std) with
// negatives redrawn rather than clamped (clamping would pile mass at 0).
double sample_bandwidth_once(const BandwidthModel& model, SeededGenerator& gen);
std::vector<double> sample_bandwidth_series(const BandwidthModel& model, std::size_t n,
                                            SeededGenerator& gen);

// n i.i.d. Bernoulli(loss_rate) drop indicators.
std::vector<bool> sample_loss(const OperatorProfile& profile, std::size_t n,
                              SeededGenerator& gen);

}  // namespace ltem
