#include "ltem/probe_emulated.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ltem::probe {

namespace {

struct SentMeta {
  PacketKind kind;
  std::uint32_t cycle_id;
  std::uint16_t seq;
  std::uint64_t send_us;
};

std::uint64_t to_us(double t_s) {
  return static_cast<std::uint64_t>(std::llround(t_s * 1e6));
}

}  // namespace

SessionResult run_probe_over_emulator(const ScenarioConfig& scenario,
                                      const ProbeSessionConfig& config) {
  config.validate();
  scenario.validate();
  const UeScenario& ue = scenario.ues.front();
  UeLink link(ue.ue_id, ue.profile, CsqValue(ue.csq), ue.seed,
              scenario.queue_capacity_bytes, scenario.rate_epoch_s);

  const double period_s = config.cycle_period_ms / 1000.0;
  const double spacing_s = config.rtt_probe_spacing_ms / 1000.0;

  std::map<std::uint64_t, SentMeta> meta;  // emulator packet id -> datagram identity
  std::vector<ProbeLogRecord> records;

  auto handle_deliveries = [&](std::vector<PacketEvent>&& events) {
    for (const auto& ev : events) {
      auto it = meta.find(ev.packet_id);
      if (it == meta.end()) continue;
      const SentMeta& m = it->second;
      ProbeLogRecord client_rec;
      client_rec.recv_time_us = to_us(ev.deliver_s);
      client_rec.cycle_id = m.cycle_id;
      client_rec.kind = static_cast<std::uint8_t>(m.kind);
      client_rec.seq = m.seq;
      client_rec.send_timestamp_us = m.send_us;
      client_rec.size_bytes = ev.size_bytes;
      client_rec.csq = ue.csq;
      records.push_back(client_rec);

      if (m.kind == PacketKind::rtt_probe) {
        // Immediate echo; the uplink is unqueued and consumes the other
        // half of this packet's base-RTT draw.
        ProbeLogRecord echo = client_rec;
        echo.kind = static_cast<std::uint8_t>(PacketKind::rtt_echo);
        echo.recv_time_us = to_us(ev.deliver_s + ev.base_rtt_ms / 2000.0);
        echo.size_bytes = static_cast<std::uint32_t>(kProbeDatagramBytes);
        records.push_back(echo);
      }
      meta.erase(it);
    }
  };

  auto send = [&](double t_s, PacketKind kind, std::uint32_t cycle, std::uint16_t seq,
                  std::uint32_t size_bytes) {
    PacketEvent ev = link.enqueue(t_s, size_bytes);
    if (ev.outcome == PacketOutcome::pending) {
      meta[ev.packet_id] = SentMeta{kind, cycle, seq, to_us(t_s)};
    }
    handle_deliveries(link.advance(t_s));
  };

  for (int c = 1; c <= config.cycles; ++c) {
    double t0 = static_cast<double>(c - 1) * period_s;
    for (int j = 0; j < config.burst_count; ++j) {
      send(t0, PacketKind::burst, static_cast<std::uint32_t>(c),
           static_cast<std::uint16_t>(j), config.burst_bytes);
    }
    for (int j = 0; j < config.rtt_probe_count; ++j) {
      double t = t0 + period_s / 2.0 + j * spacing_s;
      send(t, PacketKind::rtt_probe, static_cast<std::uint32_t>(c),
           static_cast<std::uint16_t>(j), static_cast<std::uint32_t>(kProbeDatagramBytes));
    }
  }
  // Drain whatever is still queued after the last cycle.
  double end_s = config.cycles * period_s;
  double drain_until = end_s;
  while (link.queue_packets() > 0 && drain_until < end_s + 3600.0) {
    drain_until += period_s;
    handle_deliveries(link.advance(drain_until));
  }
  handle_deliveries(link.advance(drain_until + period_s));

  std::sort(records.begin(), records.end(),
            [](const ProbeLogRecord& a, const ProbeLogRecord& b) {
              return a.recv_time_us < b.recv_time_us;
            });
  // Microsecond clocks tick: collapse ties by nudging forward.
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].recv_time_us <= records[i - 1].recv_time_us) {
      records[i].recv_time_us = records[i - 1].recv_time_us + 1;
    }
  }

  SessionResult result;
  result.log.epoch_us = 0;
  result.log.records = std::move(records);
  result.summaries = summarize_log(result.log, config.rtt_probe_count);
  return result;
}

}  // namespace ltem::probe
