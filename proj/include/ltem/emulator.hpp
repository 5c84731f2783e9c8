#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ltem/model.hpp"

namespace ltem {

enum class PacketOutcome { delivered, dropped_queue, dropped_loss, pending };

const char* to_string(PacketOutcome outcome);

struct PacketEvent {
  std::uint64_t packet_id = 0;
  int ue_id = 0;
  std::uint32_t size_bytes = 0;
  double enqueue_s = 0.0;
  double depart_s = 0.0;       // meaningful for delivered only
  double deliver_s = 0.0;      // meaningful for delivered only
  PacketOutcome outcome = PacketOutcome::pending;
  double base_rtt_ms = 0.0;    // base-RTT draw applied to this packet
};

struct LinkCounters {
  std::uint64_t enqueued = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_queue = 0;
  std::uint64_t dropped_loss = 0;
};

// Emulated per-UE downlink: FIFO queue served at a rate redrawn from the
// bandwidth model every rate epoch, a base-RTT draw per delivered packet
// (applied as a one-way delay of RTT/2, delivery kept monotone so FIFO
// order survives), and Bernoulli loss applied at enqueue.
//
// Determinism: the rate stream is seeded with the link seed itself, so the
// first rate equals the first draw of sample_bandwidth_series with that
// seed; RTT and loss use forked substreams. Links never share state, so a
// UE's trace is independent of any other UE in the scenario.
class UeLink {
 public:
  UeLink(int ue_id, const OperatorProfile& profile, CsqValue csq, std::uint64_t seed,
         std::uint64_t queue_capacity_bytes, double rate_epoch_s = 1.0);

  // Advances the link to t internally; throws ScenarioError if t < clock().
  PacketEvent enqueue(double t_s, std::uint32_t size_bytes);

  // Advances to until_t and returns every delivery completed since the last
  // drain (including ones triggered by intervening enqueue() calls).
  std::vector<PacketEvent> advance(double until_t_s);

  // RTT a probe injected at t would observe: a base mixture draw plus the
  // time the probe would wait behind the current backlog.
  double measured_rtt_ms(double t_s);

  double clock_s() const { return clock_; }
  double current_rate_mbps() const { return rate_mbps_; }
  std::uint64_t queue_bytes() const { return queue_bytes_; }
  std::size_t queue_packets() const { return queue_.size(); }
  const LinkCounters& counters() const { return counters_; }
  int ue_id() const { return ue_id_; }

  // Packets still queued (pending) at the current clock.
  std::vector<PacketEvent> pending_packets() const;

 private:
  void advance_to(double t);
  void serve_until(double boundary);
  double draw_rate_mbps() { return sample_bandwidth_once(bandwidth_, rate_gen_); }

  struct Queued {
    std::uint64_t id;
    std::uint32_t size_bytes;
    double enqueue_s;
    double remaining_bits;
  };

  int ue_id_;
  std::uint64_t capacity_bytes_;
  double rate_epoch_s_;
  RttMixtureModel mixture_;
  BandwidthModel bandwidth_;
  double loss_rate_;
  SeededGenerator rate_gen_, rtt_gen_, loss_gen_;

  std::deque<Queued> queue_;
  std::vector<PacketEvent> completed_;
  LinkCounters counters_;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t queue_bytes_ = 0;   // whole-packet occupancy (capacity check)
  double queued_bits_ = 0.0;        // remaining untransmitted bits
  double clock_ = 0.0;
  double next_epoch_s_;
  double rate_mbps_;
  double deliver_floor_s_ = 0.0;
};

enum class WorkloadKind { none, probe, bulk };

struct Workload {
  WorkloadKind kind = WorkloadKind::none;
  double bulk_rate_mbps = 0.0;
};

struct UeScenario {
  int ue_id = 0;
  std::string profile_spec = "builtin:T";  // builtin:NAME or file path
  OperatorProfile profile;
  int csq = 31;
  Workload workload;
  std::uint64_t seed = 0;
};

struct ScenarioConfig {
  double duration_s = 0.0;
  std::uint64_t queue_capacity_bytes = 3'000'000;  // > 1.25 MB so >1 s of
                                                   // queueing delay is reachable
  double rate_epoch_s = 1.0;
  std::vector<UeScenario> ues;

  void validate() const;  // throws ScenarioError
};

// Probe-cycle structure used by the probe workload: a 50 x 1470 B burst at
// each cycle start, then 10 x 64 B probes at 50 ms spacing from +500 ms.
inline constexpr int kProbeCycleBurstCount = 50;
inline constexpr std::uint32_t kProbeCycleBurstBytes = 1470;
inline constexpr int kProbeCycleProbeCount = 10;
inline constexpr std::uint32_t kProbeCycleProbeBytes = 64;
inline constexpr double kProbeCyclePeriodS = 1.0;
inline constexpr double kProbeCycleProbeOffsetS = 0.5;
inline constexpr double kProbeCycleProbeSpacingS = 0.05;

struct SummaryRow {
  int ue_id = 0;
  double t_s = 0.0;
  double rate_mbps = 0.0;
  std::uint64_t queue_bytes = 0;
  double probe_rtt_ms = 0.0;
};

struct EmulationTrace {
  int ue_id = 0;
  std::vector<PacketEvent> events;      // resolved + still-pending at end
  std::vector<SummaryRow> summaries;    // one row per whole second
  LinkCounters counters;
};

// Runs every UE on a shared simulated clock. UEs are mutually isolated by
// construction, so each link is driven by its own event stream in time
// order; 1 Hz summaries are taken at t = 1..duration before any packet
// event at the same instant.
std::vector<EmulationTrace> run_scenario(const ScenarioConfig& config);

}  // namespace ltem
