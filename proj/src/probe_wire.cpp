#include "ltem/probe_wire.hpp"

#include <algorithm>
#include <string>

namespace ltem::probe {

namespace {

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::size_t datagram_size(PacketKind kind) {
  return kind == PacketKind::burst ? kBurstDatagramBytes : kProbeDatagramBytes;
}

std::vector<std::uint8_t> encode(const ProbePacket& packet) {
  std::vector<std::uint8_t> out(datagram_size(packet.kind), 0);
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  out[4] = static_cast<std::uint8_t>(packet.kind);
  put_u32(out.data() + 5, packet.cycle_id);
  put_u16(out.data() + 9, packet.seq_in_cycle);
  put_u64(out.data() + 11, packet.send_timestamp_us);
  return out;
}

ProbePacket decode(std::span<const std::uint8_t> datagram) {
  if (datagram.size() < kHeaderBytes) {
    throw ParseError("datagram shorter than header (" + std::to_string(datagram.size()) +
                     " bytes)");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), datagram.begin())) {
    throw ParseError("bad datagram magic");
  }
  std::uint8_t kind_byte = datagram[4];
  if (kind_byte > 2) {
    throw ParseError("unknown packet kind " + std::to_string(kind_byte));
  }
  ProbePacket p;
  p.kind = static_cast<PacketKind>(kind_byte);
  if (datagram.size() != datagram_size(p.kind)) {
    throw ParseError("wrong datagram length " + std::to_string(datagram.size()) +
                     " for kind " + std::to_string(kind_byte));
  }
  p.cycle_id = get_u32(datagram.data() + 5);
  p.seq_in_cycle = get_u16(datagram.data() + 9);
  p.send_timestamp_us = get_u64(datagram.data() + 11);
  return p;
}

}  // namespace ltem::probe
