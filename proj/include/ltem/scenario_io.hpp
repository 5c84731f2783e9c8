#pragma once

#include <string>
#include <vector>

#include "ltem/emulator.hpp"

namespace ltem {

// Scenario file schema (flat key = value):
//   duration_s, queue_capacity_bytes, rate_epoch_s (optional),
//   ueN.profile (builtin:NAME or path, resolved relative to the scenario
//   file), ueN.csq, ueN.workload (none | probe | bulk:<rate_mbps>),
//   ueN.seed -- for N = 1, 2, ...
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin,
                                   const std::string& base_dir);
ScenarioConfig parse_scenario_file(const std::string& path);
std::string scenario_to_text(const ScenarioConfig& config);

// Trace CSV: ue_id,packet_id,size,enqueue_s,depart_s,deliver_s,outcome
// (depart/deliver cells empty unless delivered).
std::string trace_to_csv(const std::vector<EmulationTrace>& traces);
// Summary CSV: ue_id,t_s,rate_mbps,queue_bytes,probe_rtt_ms
std::string summaries_to_csv(const std::vector<EmulationTrace>& traces);

}  // namespace ltem
