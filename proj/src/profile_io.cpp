#include "ltem/profile_io.hpp"

#include <sstream>

#include "ltem/textio.hpp"

namespace ltem {

OperatorProfile parse_profile_text(const std::string& text, const std::string& origin) {
  KvFile kv = KvFile::parse_text(text, origin);
  OperatorProfile p;
  p.name = kv.get_string("name");
  for (int i = 0; i < 4; ++i) {
    std::string n = std::to_string(i + 1);
    p.weight_fits[i] = LinearFit{kv.get_double("b" + n), kv.get_double("a" + n)};
    p.mean_offsets_ms[i] = kv.get_double("offset" + n);
    p.component_stds_ms[i] = kv.get_double("std" + n);
  }
  p.default_mu1_ms = kv.get_double("mu1");
  p.bandwidth_mean_fit = LinearFit{kv.get_double("bw_mean_intercept"), kv.get_double("bw_mean_slope")};
  p.bandwidth_std_fit = LinearFit{kv.get_double("bw_std_intercept"), kv.get_double("bw_std_slope")};
  p.rtt_moment_fit.mean_coeffs = {kv.get_double("rtt_mean_c0"), kv.get_double("rtt_mean_c1"),
                                  kv.get_double("rtt_mean_c2")};
  p.rtt_moment_fit.std_coeffs = {kv.get_double("rtt_std_d0"), kv.get_double("rtt_std_d1")};
  p.loss_rate = kv.get_double("loss_rate");
  p.validate();
  return p;
}

OperatorProfile parse_profile_file(const std::string& path) {
  return parse_profile_text(read_text_file(path), path);
}

std::string profile_to_text(const OperatorProfile& profile) {
  std::ostringstream out;
  out << "# ltem operator profile\n";
  out << "name = " << profile.name << "\n";
  for (int i = 0; i < 4; ++i) {
    std::string n = std::to_string(i + 1);
    out << "a" << n << " = " << format_double(profile.weight_fits[i].slope) << "\n";
    out << "b" << n << " = " << format_double(profile.weight_fits[i].intercept) << "\n";
  }
  for (int i = 0; i < 4; ++i)
    out << "offset" << i + 1 << " = " << format_double(profile.mean_offsets_ms[i]) << "\n";
  for (int i = 0; i < 4; ++i)
    out << "std" << i + 1 << " = " << format_double(profile.component_stds_ms[i]) << "\n";
  out << "mu1 = " << format_double(profile.default_mu1_ms) << "\n";
  out << "bw_mean_intercept = " << format_double(profile.bandwidth_mean_fit.intercept) << "\n";
  out << "bw_mean_slope = " << format_double(profile.bandwidth_mean_fit.slope) << "\n";
  out << "bw_std_intercept = " << format_double(profile.bandwidth_std_fit.intercept) << "\n";
  out << "bw_std_slope = " << format_double(profile.bandwidth_std_fit.slope) << "\n";
  out << "rtt_mean_c0 = " << format_double(profile.rtt_moment_fit.mean_coeffs[0]) << "\n";
  out << "rtt_mean_c1 = " << format_double(profile.rtt_moment_fit.mean_coeffs[1]) << "\n";
  out << "rtt_mean_c2 = " << format_double(profile.rtt_moment_fit.mean_coeffs[2]) << "\n";
  out << "rtt_std_d0 = " << format_double(profile.rtt_moment_fit.std_coeffs[0]) << "\n";
  out << "rtt_std_d1 = " << format_double(profile.rtt_moment_fit.std_coeffs[1]) << "\n";
  out << "loss_rate = " << format_double(profile.loss_rate) << "\n";
  return out.str();
}

void write_profile_file(const std::string& path, const OperatorProfile& profile) {
  write_text_file(path, profile_to_text(profile));
}

OperatorProfile load_profile(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    std::string which = spec.substr(8);
    if (which == "T") return profile_t();
    throw ModelError("unknown builtin profile '" + which + "' (available: T)");
  }
  return parse_profile_file(spec);
}

std::string series_to_csv(const std::vector<double>& values, double period_ms) {
  std::ostringstream out;
  out << "index,time_ms,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << "," << format_double(static_cast<double>(i) * period_ms) << ","
        << format_double(values[i]) << "\n";
  }
  return out.str();
}

void write_series_csv(const std::string& path, const std::vector<double>& values,
                      double period_ms) {
  write_text_file(path, series_to_csv(values, period_ms));
}

}  // namespace ltem
