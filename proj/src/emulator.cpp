#include "ltem/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ltem {

const char* to_string(PacketOutcome outcome) {
  switch (outcome) {
    case PacketOutcome::delivered: return "delivered";
    case PacketOutcome::dropped_queue: return "dropped_queue";
    case PacketOutcome::dropped_loss: return "dropped_loss";
    case PacketOutcome::pending: return "pending";
  }
  return "?";
}

UeLink::UeLink(int ue_id, const OperatorProfile& profile, CsqValue csq, std::uint64_t seed,
               std::uint64_t queue_capacity_bytes, double rate_epoch_s)
    : ue_id_(ue_id),
      capacity_bytes_(queue_capacity_bytes),
      rate_epoch_s_(rate_epoch_s),
      mixture_(rtt_mixture_params(profile, csq)),
      bandwidth_(bandwidth_params(profile, csq)),
      loss_rate_(profile.loss_rate),
      rate_gen_(seed),
      rtt_gen_(SeededGenerator(seed).fork(1)),
      loss_gen_(SeededGenerator(seed).fork(2)),
      next_epoch_s_(rate_epoch_s) {
  if (queue_capacity_bytes == 0) throw ScenarioError("queue capacity must be > 0");
  if (rate_epoch_s <= 0.0) throw ScenarioError("rate epoch must be > 0");
  rate_mbps_ = draw_rate_mbps();
}

static double draw_base_rtt(const RttMixtureModel& mixture, SeededGenerator& gen) {
  double v = sample_mixture_once(mixture.components, gen);
  while (v < 0.0) v = sample_mixture_once(mixture.components, gen);
  return v;
}

void UeLink::serve_until(double boundary) {
  while (clock_ < boundary) {
    if (queue_.empty() || rate_mbps_ <= 0.0) {
      clock_ = boundary;
      return;
    }
    const double bits_per_s = rate_mbps_ * 1e6;
    Queued& head = queue_.front();
    double finish = clock_ + head.remaining_bits / bits_per_s;
    if (finish <= boundary) {
      clock_ = std::max(clock_, finish);
      queued_bits_ -= head.remaining_bits;
      queue_bytes_ -= head.size_bytes;

      double base_rtt = draw_base_rtt(mixture_, rtt_gen_);
      double deliver = clock_ + base_rtt / 2000.0;  // one-way = RTT/2, ms -> s
      deliver_floor_s_ = std::max(deliver_floor_s_, deliver);

      PacketEvent ev;
      ev.packet_id = head.id;
      ev.ue_id = ue_id_;
      ev.size_bytes = head.size_bytes;
      ev.enqueue_s = head.enqueue_s;
      ev.depart_s = clock_;
      ev.deliver_s = deliver_floor_s_;
      ev.outcome = PacketOutcome::delivered;
      ev.base_rtt_ms = base_rtt;
      completed_.push_back(ev);
      counters_.delivered += 1;
      queue_.pop_front();
    } else {
      double served = (boundary - clock_) * bits_per_s;
      head.remaining_bits = std::max(0.0, head.remaining_bits - served);
      queued_bits_ = std::max(0.0, queued_bits_ - served);
      clock_ = boundary;
    }
  }
}

void UeLink::advance_to(double t) {
  while (clock_ < t) {
    double boundary = std::min(t, next_epoch_s_);
    serve_until(boundary);
    if (clock_ >= next_epoch_s_) {
      rate_mbps_ = draw_rate_mbps();
      next_epoch_s_ += rate_epoch_s_;
    }
  }
}

PacketEvent UeLink::enqueue(double t_s, std::uint32_t size_bytes) {
  if (t_s < clock_) {
    throw ScenarioError("non-monotonic time: enqueue at " + std::to_string(t_s) +
                        " before link clock " + std::to_string(clock_));
  }
  advance_to(t_s);

  PacketEvent ev;
  ev.packet_id = next_packet_id_++;
  ev.ue_id = ue_id_;
  ev.size_bytes = size_bytes;
  ev.enqueue_s = t_s;
  counters_.enqueued += 1;

  if (queue_bytes_ + size_bytes > capacity_bytes_) {
    ev.outcome = PacketOutcome::dropped_queue;
    counters_.dropped_queue += 1;
    return ev;
  }
  if (loss_gen_.bernoulli(loss_rate_)) {
    ev.outcome = PacketOutcome::dropped_loss;
    counters_.dropped_loss += 1;
    return ev;
  }
  ev.outcome = PacketOutcome::pending;
  queue_.push_back(Queued{ev.packet_id, size_bytes, t_s, size_bytes * 8.0});
  queue_bytes_ += size_bytes;
  queued_bits_ += size_bytes * 8.0;
  return ev;
}

std::vector<PacketEvent> UeLink::advance(double until_t_s) {
  if (until_t_s < clock_) {
    throw ScenarioError("non-monotonic time: advance to " + std::to_string(until_t_s) +
                        " before link clock " + std::to_string(clock_));
  }
  advance_to(until_t_s);
  std::vector<PacketEvent> out;
  out.swap(completed_);
  return out;
}

double UeLink::measured_rtt_ms(double t_s) {
  advance_to(t_s);
  double base = draw_base_rtt(mixture_, rtt_gen_);
  if (queued_bits_ <= 0.0) return base;
  if (rate_mbps_ <= 0.0) return std::numeric_limits<double>::infinity();
  double wait_s = queued_bits_ / (rate_mbps_ * 1e6);
  return base + wait_s * 1000.0;
}

std::vector<PacketEvent> UeLink::pending_packets() const {
  std::vector<PacketEvent> out;
  out.reserve(queue_.size());
  for (const auto& q : queue_) {
    PacketEvent ev;
    ev.packet_id = q.id;
    ev.ue_id = ue_id_;
    ev.size_bytes = q.size_bytes;
    ev.enqueue_s = q.enqueue_s;
    ev.outcome = PacketOutcome::pending;
    out.push_back(ev);
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (!(duration_s > 0.0)) throw ScenarioError("scenario duration must be > 0");
  if (ues.empty()) throw ScenarioError("scenario needs at least one UE");
  if (queue_capacity_bytes == 0) throw ScenarioError("queue capacity must be > 0");
  if (!(rate_epoch_s > 0.0)) throw ScenarioError("rate epoch must be > 0");
  for (const auto& ue : ues) {
    if (ue.csq < 0 || ue.csq > 31) {
      throw ScenarioError("UE " + std::to_string(ue.ue_id) + ": CSQ out of range");
    }
    if (ue.workload.kind == WorkloadKind::bulk && !(ue.workload.bulk_rate_mbps > 0.0)) {
      throw ScenarioError("UE " + std::to_string(ue.ue_id) + ": bulk rate must be > 0");
    }
  }
}

namespace {

struct EnqueueOp {
  double t;
  std::uint32_t size_bytes;
};

std::vector<EnqueueOp> workload_ops(const Workload& wl, double duration_s) {
  std::vector<EnqueueOp> ops;
  switch (wl.kind) {
    case WorkloadKind::none:
      break;
    case WorkloadKind::bulk: {
      double interval = kProbeCycleBurstBytes * 8.0 / (wl.bulk_rate_mbps * 1e6);
      for (std::uint64_t i = 0;; ++i) {
        double t = static_cast<double>(i) * interval;
        if (t >= duration_s) break;
        ops.push_back({t, kProbeCycleBurstBytes});
      }
      break;
    }
    case WorkloadKind::probe: {
      for (std::uint64_t c = 0;; ++c) {
        double t0 = static_cast<double>(c) * kProbeCyclePeriodS;
        if (t0 >= duration_s) break;
        for (int j = 0; j < kProbeCycleBurstCount; ++j) {
          ops.push_back({t0, kProbeCycleBurstBytes});
        }
        for (int j = 0; j < kProbeCycleProbeCount; ++j) {
          double t = t0 + kProbeCycleProbeOffsetS + j * kProbeCycleProbeSpacingS;
          if (t < duration_s) ops.push_back({t, kProbeCycleProbeBytes});
        }
      }
      break;
    }
  }
  return ops;
}

}  // namespace

std::vector<EmulationTrace> run_scenario(const ScenarioConfig& config) {
  config.validate();

  std::vector<EmulationTrace> traces;
  traces.reserve(config.ues.size());

  // No state is shared between links, so each UE runs its own timeline;
  // the shared clock is implicit in the identical event schedules.
  for (const auto& ue : config.ues) {
    UeLink link(ue.ue_id, ue.profile, CsqValue(ue.csq), ue.seed,
                config.queue_capacity_bytes, config.rate_epoch_s);
    EmulationTrace trace;
    trace.ue_id = ue.ue_id;

    std::vector<EnqueueOp> ops = workload_ops(ue.workload, config.duration_s);
    std::size_t next_op = 0;
    // Summaries at whole seconds, taken before packet events at the same
    // instant so they see the pre-arrival queue state.
    for (int sec = 1; sec <= static_cast<int>(config.duration_s); ++sec) {
      double ts = static_cast<double>(sec);
      while (next_op < ops.size() && ops[next_op].t < ts) {
        PacketEvent ev = link.enqueue(ops[next_op].t, ops[next_op].size_bytes);
        if (ev.outcome != PacketOutcome::pending) trace.events.push_back(ev);
        ++next_op;
      }
      for (auto& ev : link.advance(ts)) trace.events.push_back(ev);
      SummaryRow row;
      row.ue_id = ue.ue_id;
      row.t_s = ts;
      row.rate_mbps = link.current_rate_mbps();
      row.queue_bytes = link.queue_bytes();
      row.probe_rtt_ms = link.measured_rtt_ms(ts);
      trace.summaries.push_back(row);
    }
    while (next_op < ops.size()) {
      PacketEvent ev = link.enqueue(ops[next_op].t, ops[next_op].size_bytes);
      if (ev.outcome != PacketOutcome::pending) trace.events.push_back(ev);
      ++next_op;
    }
    for (auto& ev : link.advance(config.duration_s)) trace.events.push_back(ev);

    for (auto& ev : link.pending_packets()) trace.events.push_back(ev);
    trace.counters = link.counters();

    std::sort(trace.events.begin(), trace.events.end(),
              [](const PacketEvent& a, const PacketEvent& b) {
                return a.packet_id < b.packet_id;
              });
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace ltem
