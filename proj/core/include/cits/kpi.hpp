#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cits/message.hpp"

namespace cits {

inline constexpr std::string_view kMessagesCsvHeader =
    "msg_id,t_tx_ms,t_rx_ms,src,dst,rat,layer,service,bytes,status";

// Interned endpoint names. Id 0 is always "broadcast".
class NameTable {
 public:
  NameTable();
  NodeId intern(const std::string& name);
  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

// One row per message. Times are integer microseconds so the 3-decimal
// millisecond CSV encoding is lossless.
struct KpiRecord {
  std::uint64_t msg_id = 0;
  std::int64_t t_tx_us = 0;
  std::optional<std::int64_t> t_rx_us;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  std::optional<RatId> rat;
  LayerId layer = LayerId::base;
  ServiceId service = ServiceId::safety_core;
  std::uint32_t bytes = 0;
  MessageStatus status = MessageStatus::created;
};

std::int64_t to_us(double seconds);

// Builds the record for a message with a terminal status. t_rx_s is only
// used when the status is delivered.
KpiRecord make_record(const Message& msg, MessageStatus status, double t_rx_s = 0.0);

// Append-only record store. Rejects duplicate ids, non-terminal statuses and
// deliveries that arrive before they were sent.
class KpiSink {
 public:
  void record_outcome(const KpiRecord& record);
  const std::vector<KpiRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  void reserve(std::size_t n) { records_.reserve(n); }
  // Hands the records over; the sink keeps rejecting the ids it has seen.
  std::vector<KpiRecord> release() { return std::move(records_); }

 private:
  std::vector<KpiRecord> records_;
  std::vector<bool> seen_;
  std::unordered_set<std::uint64_t> sparse_seen_;
};

struct LatencyPercentiles {
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
};

struct GroupStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t erased = 0;
  std::uint64_t dropped_no_coverage = 0;
  std::uint64_t dropped_policy = 0;
  std::uint64_t deferred = 0;
  std::uint64_t delivered_bytes = 0;
  double pdr = 0.0;
  double goodput_bps = 0.0;
  std::optional<LatencyPercentiles> latency;  // absent when nothing was delivered

  bool conserved() const {
    return sent == delivered + erased + dropped_no_coverage + dropped_policy + deferred;
  }
};

struct Summary {
  double duration_s = 0.0;
  std::map<std::string, GroupStats> groups;  // keyed "layer:rat"
  GroupStats run;
  // Run-level counters that are not derivable from the records (deferral
  // count, channel airtime, ...). Filled by the simulator.
  std::map<std::string, double> extras;

  bool conserved() const;
};

std::string group_key(LayerId layer, std::optional<RatId> rat);

// Nearest-rank percentile of an ascending sample; p in (0, 100].
std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, int p);

Summary summarize(const std::vector<KpiRecord>& records, double duration_s);

struct OutputFormats {
  bool csv = true;
  bool json = true;
};

// Writes messages.csv and/or summary.json into dir. Output is a pure
// function of the inputs.
void write_outputs(const std::vector<KpiRecord>& records, const NameTable& names,
                   const Summary& summary, const std::filesystem::path& dir,
                   OutputFormats formats);

std::string format_ms(std::int64_t us);
std::string summary_json(const Summary& summary);

struct ParsedMessages {
  NameTable names;
  std::vector<KpiRecord> records;
};
ParsedMessages read_messages_csv(const std::filesystem::path& file);

}  // namespace cits
