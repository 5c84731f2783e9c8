#pragma once

#include <string>
#include <vector>

#include "ltem/model.hpp"

namespace ltem {

// Profile config schema (flat key = value):
//   name, a1..a4, b1..b4 (weight fits w_i = a_i*csq + b_i),
//   offset1..offset4 (ms, offset1 = 0), std1..std4 (ms), mu1 (ms),
//   bw_mean_intercept, bw_mean_slope, bw_std_intercept, bw_std_slope (Mbps),
//   rtt_mean_c0, rtt_mean_c1, rtt_mean_c2, rtt_std_d0, rtt_std_d1 (ms),
//   loss_rate.
OperatorProfile parse_profile_text(const std::string& text, const std::string& origin);
OperatorProfile parse_profile_file(const std::string& path);
std::string profile_to_text(const OperatorProfile& profile);
void write_profile_file(const std::string& path, const OperatorProfile& profile);

// "builtin:T" or a config file path.
OperatorProfile load_profile(const std::string& spec);

// Series CSV with header `index,time_ms,value`.
std::string series_to_csv(const std::vector<double>& values, double period_ms);
void write_series_csv(const std::string& path, const std::vector<double>& values,
                      double period_ms);

}  // namespace ltem
