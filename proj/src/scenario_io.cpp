#include "ltem/scenario_io.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ltem/profile_io.hpp"
#include "ltem/textio.hpp"

namespace ltem {

namespace {

Workload parse_workload(const std::string& text, const std::string& context) {
  if (text == "none") return Workload{WorkloadKind::none, 0.0};
  if (text == "probe") return Workload{WorkloadKind::probe, 0.0};
  if (text.rfind("bulk:", 0) == 0) {
    double rate = parse_double(text.substr(5), context + ": bulk rate");
    return Workload{WorkloadKind::bulk, rate};
  }
  throw ParseError(context + ": unknown workload '" + text + "' (none|probe|bulk:<mbps>)");
}

std::string workload_to_text(const Workload& wl) {
  switch (wl.kind) {
    case WorkloadKind::none: return "none";
    case WorkloadKind::probe: return "probe";
    case WorkloadKind::bulk: return "bulk:" + format_double(wl.bulk_rate_mbps);
  }
  return "none";
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin,
                                   const std::string& base_dir) {
  KvFile kv = KvFile::parse_text(text, origin);
  ScenarioConfig cfg;
  cfg.duration_s = kv.get_double("duration_s");
  if (kv.has("queue_capacity_bytes")) {
    cfg.queue_capacity_bytes = static_cast<std::uint64_t>(kv.get_int("queue_capacity_bytes"));
  }
  if (kv.has("rate_epoch_s")) cfg.rate_epoch_s = kv.get_double("rate_epoch_s");

  for (int n = 1;; ++n) {
    std::string prefix = "ue" + std::to_string(n) + ".";
    if (!kv.has(prefix + "csq")) break;
    UeScenario ue;
    ue.ue_id = n;
    ue.profile_spec = kv.find(prefix + "profile").value_or("builtin:T");
    ue.csq = static_cast<int>(kv.get_int(prefix + "csq"));
    ue.workload = parse_workload(kv.find(prefix + "workload").value_or("none"),
                                 origin + ": " + prefix + "workload");
    ue.seed = static_cast<std::uint64_t>(kv.get_int(prefix + "seed"));

    std::string spec = ue.profile_spec;
    if (spec.rfind("builtin:", 0) != 0 && !base_dir.empty() &&
        !std::filesystem::path(spec).is_absolute()) {
      spec = (std::filesystem::path(base_dir) / spec).string();
    }
    ue.profile = load_profile(spec);
    cfg.ues.push_back(std::move(ue));
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::string base = std::filesystem::path(path).parent_path().string();
  return parse_scenario_text(read_text_file(path), path, base);
}

std::string scenario_to_text(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "# ltem emulation scenario\n";
  out << "duration_s = " << format_double(config.duration_s) << "\n";
  out << "queue_capacity_bytes = " << config.queue_capacity_bytes << "\n";
  out << "rate_epoch_s = " << format_double(config.rate_epoch_s) << "\n";
  for (const auto& ue : config.ues) {
    std::string prefix = "ue" + std::to_string(ue.ue_id) + ".";
    out << "\n";
    out << prefix << "profile = " << ue.profile_spec << "\n";
    out << prefix << "csq = " << ue.csq << "\n";
    out << prefix << "workload = " << workload_to_text(ue.workload) << "\n";
    out << prefix << "seed = " << ue.seed << "\n";
  }
  return out.str();
}

std::string trace_to_csv(const std::vector<EmulationTrace>& traces) {
  std::ostringstream out;
  out << "ue_id,packet_id,size,enqueue_s,depart_s,deliver_s,outcome\n";
  char buf[64];
  for (const auto& trace : traces) {
    for (const auto& ev : trace.events) {
      out << ev.ue_id << "," << ev.packet_id << "," << ev.size_bytes << ",";
      std::snprintf(buf, sizeof buf, "%.9f", ev.enqueue_s);
      out << buf << ",";
      if (ev.outcome == PacketOutcome::delivered) {
        std::snprintf(buf, sizeof buf, "%.9f", ev.depart_s);
        out << buf << ",";
        std::snprintf(buf, sizeof buf, "%.9f", ev.deliver_s);
        out << buf;
      } else {
        out << ",";
      }
      out << "," << to_string(ev.outcome) << "\n";
    }
  }
  return out.str();
}

std::string summaries_to_csv(const std::vector<EmulationTrace>& traces) {
  std::ostringstream out;
  out << "ue_id,t_s,rate_mbps,queue_bytes,probe_rtt_ms\n";
  char buf[64];
  for (const auto& trace : traces) {
    for (const auto& row : trace.summaries) {
      out << row.ue_id << ",";
      std::snprintf(buf, sizeof buf, "%.3f", row.t_s);
      out << buf << ",";
      std::snprintf(buf, sizeof buf, "%.6f", row.rate_mbps);
      out << buf << "," << row.queue_bytes << ",";
      std::snprintf(buf, sizeof buf, "%.6f", row.probe_rtt_ms);
      out << buf << "\n";
    }
  }
  return out.str();
}

}  // namespace ltem
