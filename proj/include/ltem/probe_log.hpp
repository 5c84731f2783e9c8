#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltem/probe_wire.hpp"

namespace ltem::probe {

// One observed datagram. recv_time_us is the observing endpoint's monotonic
// clock; send_timestamp_us is whatever the datagram carried (the original
// sender clock, preserved by echoes).
struct ProbeLogRecord {
  std::uint64_t recv_time_us = 0;
  std::uint32_t cycle_id = 0;
  std::uint8_t kind = 0;
  std::uint16_t seq = 0;
  std::uint64_t send_timestamp_us = 0;
  std::uint32_t size_bytes = 0;
  std::optional<int> csq;

  bool operator==(const ProbeLogRecord&) const = default;
};

struct ProbeLog {
  std::optional<std::uint64_t> epoch_us;  // wall clock at session start
  std::vector<ProbeLogRecord> records;    // strictly increasing recv_time_us
};

// CSV with header `recv_time_us,cycle_id,kind,seq,send_timestamp_us,
// size_bytes,csq` (csq cell empty when absent); an optional leading
// `# epoch_us=...` comment carries the wall-clock anchor.
std::string log_to_csv(const ProbeLog& log);
void write_log(const std::string& path, const ProbeLog& log);
ProbeLog parse_log_text(const std::string& text, const std::string& origin);
ProbeLog parse_log(const std::string& path);

struct CycleSummary {
  std::uint32_t cycle_id = 0;
  std::optional<double> bandwidth_mbps;
  std::vector<double> rtt_ms;
  double loss_fraction = 0.0;
  std::optional<int> csq;
};

// Packet-train bandwidth from one cycle's burst arrivals: bytes after the
// first arrival over the receiver-clock span. Uses receiver timestamps
// only, so it is immune to any clock offset between endpoints. Returns
// nullopt with fewer than 2 arrivals; throws ParseError("corrupt log") on
// non-monotonic timestamps.
std::optional<double> estimate_bandwidth_from_burst(const std::vector<ProbeLogRecord>& burst);

// RTT from a probe-send time and its echo's arrival time, both on the
// sender clock (the echo preserves the probe's send timestamp).
double estimate_rtt_ms(std::uint64_t send_us, std::uint64_t echo_recv_us);
// Record-pair form; validates the (cycle_id, seq) match ("orphan echo").
double estimate_rtt_ms(const ProbeLogRecord& probe_send, const ProbeLogRecord& echo_arrival);

// Summary of one cycle's records: bandwidth from kind-0 arrivals, RTTs from
// kind-2 arrivals, loss from matched probes (kind-2 when present, else
// kind-1 arrivals on a client-side log).
CycleSummary summarize_cycle(const std::vector<ProbeLogRecord>& cycle_records,
                             int expected_probes = 10);

std::vector<CycleSummary> summarize_log(const ProbeLog& log, int expected_probes = 10);

// CSV: cycle_id,bandwidth_mbps,rtt_count,rtt_mean_ms,loss_fraction,csq
std::string summaries_to_csv(const std::vector<CycleSummary>& summaries);

}  // namespace ltem::probe
