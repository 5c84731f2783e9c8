#pragma once

#include "ltem/emulator.hpp"
#include "ltem/probe_session.hpp"

namespace ltem::probe {

// Closed-loop probe session over an emulated link: both endpoints run
// in-process on a simulated clock against the first UE of the scenario
// (its workload field is ignored; the probe traffic is the workload).
// Burst and probe datagrams traverse the emulated downlink queue; echoes
// return over an unqueued uplink that consumes the other half of the same
// base-RTT draw, so a probe observes queueing delay + transmission time +
// one full base-RTT sample.
//
// The returned log merges both endpoints' observations (client-side burst
// and probe arrivals, server-side echo arrivals) ordered by receive time.
SessionResult run_probe_over_emulator(const ScenarioConfig& scenario,
                                      const ProbeSessionConfig& config);

}  // namespace ltem::probe
