#include "ltem/probe_log.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ltem/textio.hpp"

namespace ltem::probe {

std::string log_to_csv(const ProbeLog& log) {
  std::ostringstream out;
  if (log.epoch_us) out << "# epoch_us=" << *log.epoch_us << "\n";
  out << "recv_time_us,cycle_id,kind,seq,send_timestamp_us,size_bytes,csq\n";
  for (const auto& r : log.records) {
    out << r.recv_time_us << "," << r.cycle_id << "," << static_cast<int>(r.kind) << ","
        << r.seq << "," << r.send_timestamp_us << "," << r.size_bytes << ",";
    if (r.csq) out << *r.csq;
    out << "\n";
  }
  return out.str();
}

void write_log(const std::string& path, const ProbeLog& log) {
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    if (log.records[i].recv_time_us <= log.records[i - 1].recv_time_us) {
      throw ParseError("log records must be strictly increasing in recv_time_us");
    }
  }
  write_text_file(path, log_to_csv(log));
}

ProbeLog parse_log_text(const std::string& text, const std::string& origin) {
  ProbeLog log;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::uint64_t prev_recv = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (t[0] == '#') {
      if (t.rfind("# epoch_us=", 0) == 0) {
        log.epoch_us = static_cast<std::uint64_t>(parse_int(t.substr(11), where));
      }
      continue;
    }
    if (!header_seen) {
      if (t != "recv_time_us,cycle_id,kind,seq,send_timestamp_us,size_bytes,csq") {
        throw ParseError(where + ": unexpected log header");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells = split(t, ',');
    if (cells.size() != 7) {
      throw ParseError(where + ": expected 7 fields, got " + std::to_string(cells.size()));
    }
    ProbeLogRecord r;
    r.recv_time_us = static_cast<std::uint64_t>(parse_int(cells[0], where));
    r.cycle_id = static_cast<std::uint32_t>(parse_int(cells[1], where));
    r.kind = static_cast<std::uint8_t>(parse_int(cells[2], where));
    r.seq = static_cast<std::uint16_t>(parse_int(cells[3], where));
    r.send_timestamp_us = static_cast<std::uint64_t>(parse_int(cells[4], where));
    r.size_bytes = static_cast<std::uint32_t>(parse_int(cells[5], where));
    if (!trim(cells[6]).empty()) r.csq = static_cast<int>(parse_int(cells[6], where));
    if (!log.records.empty() && r.recv_time_us <= prev_recv) {
      throw ParseError(where + ": recv_time_us not strictly increasing");
    }
    prev_recv = r.recv_time_us;
    log.records.push_back(r);
  }
  if (!header_seen) throw ParseError(origin + ": missing log header");
  return log;
}

ProbeLog parse_log(const std::string& path) {
  return parse_log_text(read_text_file(path), path);
}

std::optional<double> estimate_bandwidth_from_burst(const std::vector<ProbeLogRecord>& burst) {
  if (burst.size() < 2) return std::nullopt;
  std::uint64_t bits = 0;
  for (std::size_t i = 1; i < burst.size(); ++i) {
    if (burst[i].recv_time_us <= burst[i - 1].recv_time_us) {
      throw ParseError("corrupt log: burst arrivals not monotonic");
    }
    bits += static_cast<std::uint64_t>(burst[i].size_bytes) * 8;
  }
  double span_s = static_cast<double>(burst.back().recv_time_us - burst.front().recv_time_us) / 1e6;
  return static_cast<double>(bits) / span_s / 1e6;
}

double estimate_rtt_ms(std::uint64_t send_us, std::uint64_t echo_recv_us) {
  if (echo_recv_us < send_us) {
    throw ParseError("corrupt log: echo arrived before probe send");
  }
  return static_cast<double>(echo_recv_us - send_us) / 1000.0;
}

double estimate_rtt_ms(const ProbeLogRecord& probe_send, const ProbeLogRecord& echo_arrival) {
  if (probe_send.cycle_id != echo_arrival.cycle_id || probe_send.seq != echo_arrival.seq) {
    throw ParseError("orphan echo: cycle/seq mismatch");
  }
  return estimate_rtt_ms(probe_send.send_timestamp_us, echo_arrival.recv_time_us);
}

CycleSummary summarize_cycle(const std::vector<ProbeLogRecord>& cycle_records,
                             int expected_probes) {
  if (expected_probes <= 0) throw ParseError("summarize_cycle: expected_probes must be > 0");
  CycleSummary s;
  if (cycle_records.empty()) return s;
  s.cycle_id = cycle_records.front().cycle_id;

  std::vector<ProbeLogRecord> burst;
  std::set<std::uint16_t> probe_seqs, echo_seqs;
  for (const auto& r : cycle_records) {
    if (!s.csq && r.csq) s.csq = r.csq;
    switch (static_cast<PacketKind>(r.kind)) {
      case PacketKind::burst:
        burst.push_back(r);
        break;
      case PacketKind::rtt_probe:
        probe_seqs.insert(r.seq);
        break;
      case PacketKind::rtt_echo:
        echo_seqs.insert(r.seq);
        s.rtt_ms.push_back(estimate_rtt_ms(r.send_timestamp_us, r.recv_time_us));
        break;
    }
  }
  std::sort(burst.begin(), burst.end(),
            [](const ProbeLogRecord& a, const ProbeLogRecord& b) {
              return a.recv_time_us < b.recv_time_us;
            });
  s.bandwidth_mbps = estimate_bandwidth_from_burst(burst);

  // Loss from matched echoes where available (server-side or merged log),
  // otherwise from probe arrivals (client-side log).
  std::size_t matched = !echo_seqs.empty() || probe_seqs.empty() ? echo_seqs.size()
                                                                 : probe_seqs.size();
  matched = std::min<std::size_t>(matched, expected_probes);
  s.loss_fraction = 1.0 - static_cast<double>(matched) / expected_probes;
  return s;
}

std::vector<CycleSummary> summarize_log(const ProbeLog& log, int expected_probes) {
  std::map<std::uint32_t, std::vector<ProbeLogRecord>> by_cycle;
  for (const auto& r : log.records) by_cycle[r.cycle_id].push_back(r);
  std::vector<CycleSummary> out;
  out.reserve(by_cycle.size());
  for (const auto& [cycle, records] : by_cycle) {
    out.push_back(summarize_cycle(records, expected_probes));
  }
  return out;
}

std::string summaries_to_csv(const std::vector<CycleSummary>& summaries) {
  std::ostringstream out;
  out << "cycle_id,bandwidth_mbps,rtt_count,rtt_mean_ms,loss_fraction,csq\n";
  for (const auto& s : summaries) {
    out << s.cycle_id << ",";
    if (s.bandwidth_mbps) out << format_double(*s.bandwidth_mbps);
    out << "," << s.rtt_ms.size() << ",";
    if (!s.rtt_ms.empty()) {
      double sum = 0.0;
      for (double v : s.rtt_ms) sum += v;
      out << format_double(sum / static_cast<double>(s.rtt_ms.size()));
    }
    out << "," << format_double(s.loss_fraction) << ",";
    if (s.csq) out << *s.csq;
    out << "\n";
  }
  return out.str();
}

}  // namespace ltem::probe
