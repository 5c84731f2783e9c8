#include "ltem/model.hpp"

#include <algorithm>
#include <cmath>

namespace ltem {

CsqValue::CsqValue(int value) : value_(value) {
  if (value < 0 || value > 31) {
    throw ModelError("CSQ out of range 0..31: " + std::to_string(value));
  }
}

int csq_to_rssi_dbm(CsqValue csq) { return -113 + 2 * csq.value(); }

RttMixtureModel make_rtt_mixture(std::vector<GaussianComponent> components,
                                 double mu1_ms, std::optional<int> source_csq) {
  if (components.size() != 4) {
    throw ModelError("RTT mixture requires exactly 4 components, got " +
                     std::to_string(components.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (c.weight < -1e-12 || c.weight > 1.0 + 1e-12) {
      throw ModelError("mixture weight outside [0, 1]");
    }
    if (c.std_ms < 0.0) {
      throw ModelError("mixture component std must be >= 0");
    }
    if (i > 0 && !(c.mean_ms > components[i - 1].mean_ms)) {
      throw ModelError("mixture component means must be strictly increasing");
    }
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ModelError("mixture weights must sum to 1");
  }
  for (auto& c : components) c.weight /= sum;  // kill residual drift
  return RttMixtureModel{std::move(components), mu1_ms, source_csq};
}

std::pair<double, double> rtt_moments(const RttMomentModel& model, CsqValue csq) {
  double x = csq.value();
  double mean = model.mean_coeffs[0] + model.mean_coeffs[1] * x + model.mean_coeffs[2] * x * x;
  double std = std::max(0.0, model.std_coeffs[0] + model.std_coeffs[1] * x);
  return {mean, std};
}

void OperatorProfile::validate() const {
  if (mean_offsets_ms[0] != 0.0) {
    throw ModelError("profile '" + name + "': first mean offset must be 0");
  }
  for (int i = 1; i < 4; ++i) {
    if (!(mean_offsets_ms[i] > mean_offsets_ms[i - 1])) {
      throw ModelError("profile '" + name + "': mean offsets must be strictly increasing");
    }
  }
  for (double s : component_stds_ms) {
    if (s < 0.0) throw ModelError("profile '" + name + "': component std must be >= 0");
  }
  if (loss_rate < 0.0 || loss_rate > 1.0) {
    throw ModelError("profile '" + name + "': loss_rate must be in [0, 1]");
  }
}

const OperatorProfile& profile_t() {
  static const OperatorProfile profile = [] {
    OperatorProfile p;
    p.name = "T";
    p.weight_fits = {LinearFit{-0.1285, 0.0079}, LinearFit{-0.3834, 0.0430},
                     LinearFit{0.3244, -0.0059}, LinearFit{0.2937, -0.0096}};
    p.mean_offsets_ms = {0.0, 9.6, 19.4, 28.5};
    p.component_stds_ms = {0.02, 0.03, 0.04, 0.04};
    p.default_mu1_ms = 35.0;  // first peak observed between 32.5 and 37.5 ms
    p.bandwidth_mean_fit = LinearFit{0.13, 0.55};
    p.bandwidth_std_fit = LinearFit{-1.17, 0.31};
    p.rtt_moment_fit.mean_coeffs = {177.69, -9.11, 0.158};
    p.rtt_moment_fit.std_coeffs = {97.21, -3.17};
    p.loss_rate = 0.0035;
    p.validate();
    return p;
  }();
  return profile;
}

std::array<double, 4> evaluate_weight_fits(const OperatorProfile& profile, CsqValue csq) {
  std::array<double, 4> raw{};
  for (int i = 0; i < 4; ++i) raw[i] = profile.weight_fits[i](csq.value());
  return raw;
}

RttMixtureModel rtt_mixture_params(const OperatorProfile& profile, CsqValue csq,
                                   std::optional<double> mu1_ms) {
  std::array<double, 4> w = evaluate_weight_fits(profile, csq);
  double sum = 0.0;
  for (double& wi : w) {
    wi = std::max(0.0, wi);
    sum += wi;
  }
  if (sum <= 0.0) {
    throw ModelError("degenerate mixture: all weight fits <= 0 at CSQ " +
                     std::to_string(csq.value()));
  }
  double mu1 = mu1_ms.value_or(profile.default_mu1_ms);
  std::vector<GaussianComponent> components(4);
  for (int i = 0; i < 4; ++i) {
    components[i].weight = w[i] / sum;
    components[i].mean_ms = mu1 + profile.mean_offsets_ms[i];
    components[i].std_ms = profile.component_stds_ms[i];
  }
  return make_rtt_mixture(std::move(components), mu1, csq.value());
}

BandwidthModel bandwidth_params(const OperatorProfile& profile, CsqValue csq) {
  BandwidthModel m;
  m.mean_mbps = std::max(0.0, profile.bandwidth_mean_fit(csq.value()));
  m.std_mbps = std::max(0.0, profile.bandwidth_std_fit(csq.value()));
  m.source_csq = csq.value();
  return m;
}

std::pair<double, double> mixture_moments(const std::vector<GaussianComponent>& components) {
  double mean = 0.0;
  double second = 0.0;
  for (const auto& c : components) {
    mean += c.weight * c.mean_ms;
    second += c.weight * (c.std_ms * c.std_ms + c.mean_ms * c.mean_ms);
  }
  double var = std::max(0.0, second - mean * mean);
  return {mean, std::sqrt(var)};
}

std::pair<double, double> mixture_moments(const RttMixtureModel& mixture) {
  return mixture_moments(mixture.components);
}

double sample_mixture_once(const std::vector<GaussianComponent>& components,
                           SeededGenerator& gen) {
  double u = gen.uniform01();
  double acc = 0.0;
  const GaussianComponent* chosen = &components.back();
  for (const auto& c : components) {
    acc += c.weight;
    if (u < acc) {
      chosen = &c;
      break;
    }
  }
  return gen.normal(chosen->mean_ms, chosen->std_ms);
}

std::vector<double> sample_rtt_series(const RttMixtureModel& mixture, std::size_t n,
                                      SeededGenerator& gen) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = sample_mixture_once(mixture.components, gen);
    while (v < 0.0) v = sample_mixture_once(mixture.components, gen);
    out.push_back(v);
  }
  return out;
}

double sample_bandwidth_once(const BandwidthModel& model, SeededGenerator& gen) {
  if (model.std_mbps <= 0.0) {
    if (model.mean_mbps < 0.0) throw ModelError("bandwidth model mean must be >= 0");
    return model.mean_mbps;  // degenerate Gaussian
  }
  double v = gen.normal(model.mean_mbps, model.std_mbps);
  while (v < 0.0) v = gen.normal(model.mean_mbps, model.std_mbps);
  return v;
}

std::vector<double> sample_bandwidth_series(const BandwidthModel& model, std::size_t n,
                                            SeededGenerator& gen) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_bandwidth_once(model, gen));
  return out;
}

std::vector<bool> sample_loss(const OperatorProfile& profile, std::size_t n,
                              SeededGenerator& gen) {
  std::vector<bool> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.bernoulli(profile.loss_rate));
  return out;
}

}  // namespace ltem
