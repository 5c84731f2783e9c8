#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ltem/errors.hpp"

namespace ltem::probe {

// Fixed-layout datagram, network byte order:
//   magic   4 B  ASCII "LTEM"
//   kind    1 B  0 = burst, 1 = rtt_probe, 2 = rtt_echo
//   cycle   4 B  unsigned cycle id
//   seq     2 B  unsigned sequence within cycle
//   sent    8 B  sender clock, microseconds
//   padding zeros to the fixed datagram size for the kind
// Burst datagrams are 1470 bytes; probe and echo datagrams are 64 bytes.
inline constexpr std::array<std::uint8_t, 4> kMagic = {'L', 'T', 'E', 'M'};
inline constexpr std::size_t kHeaderBytes = 19;
inline constexpr std::size_t kBurstDatagramBytes = 1470;
inline constexpr std::size_t kProbeDatagramBytes = 64;

enum class PacketKind : std::uint8_t { burst = 0, rtt_probe = 1, rtt_echo = 2 };

struct ProbePacket {
  PacketKind kind = PacketKind::burst;
  std::uint32_t cycle_id = 0;
  std::uint16_t seq_in_cycle = 0;
  std::uint64_t send_timestamp_us = 0;
};

std::size_t datagram_size(PacketKind kind);

std::vector<std::uint8_t> encode(const ProbePacket& packet);

// Throws ParseError on bad magic, unknown kind or wrong datagram length.
ProbePacket decode(std::span<const std::uint8_t> datagram);

}  // namespace ltem::probe
