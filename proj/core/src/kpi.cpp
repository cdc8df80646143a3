#include "cits/kpi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "cits/error.hpp"

namespace cits {

namespace {
constexpr std::uint64_t kDenseIdLimit = std::uint64_t{1} << 28;
}

NameTable::NameTable() { intern("broadcast"); }

NodeId NameTable::intern(const std::string& name) {
  const auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

std::int64_t to_us(double seconds) { return std::llround(seconds * 1e6); }

KpiRecord make_record(const Message& msg, MessageStatus status, double t_rx_s) {
  KpiRecord r;
  r.msg_id = msg.id;
  r.t_tx_us = to_us(msg.created_at);
  if (status == MessageStatus::delivered) r.t_rx_us = to_us(t_rx_s);
  r.src = msg.src;
  r.dst = msg.dst;
  r.rat = msg.rat;
  r.layer = msg.layer;
  r.service = msg.service;
  r.bytes = msg.bytes;
  r.status = status;
  return r;
}

void KpiSink::record_outcome(const KpiRecord& record) {
  if (record.status == MessageStatus::created) {
    throw KpiError("message " + std::to_string(record.msg_id) + " has no terminal status");
  }
  if (record.status == MessageStatus::delivered) {
    if (!record.t_rx_us) {
      throw KpiError("delivered message " + std::to_string(record.msg_id) + " lacks t_rx");
    }
    if (*record.t_rx_us < record.t_tx_us) {
      throw KpiError("message " + std::to_string(record.msg_id) + " delivered before it was sent");
    }
  } else if (record.t_rx_us) {
    throw KpiError("undelivered message " + std::to_string(record.msg_id) + " carries t_rx");
  }

  if (record.msg_id < kDenseIdLimit) {
    if (seen_.size() <= record.msg_id) seen_.resize(std::max<std::size_t>(record.msg_id + 1, seen_.size() * 2));
    if (seen_[record.msg_id]) throw KpiError("duplicate msg_id " + std::to_string(record.msg_id));
    seen_[record.msg_id] = true;
  } else if (!sparse_seen_.insert(record.msg_id).second) {
    throw KpiError("duplicate msg_id " + std::to_string(record.msg_id));
  }
  records_.push_back(record);
}

bool Summary::conserved() const {
  if (!run.conserved()) return false;
  return std::all_of(groups.begin(), groups.end(),
                     [](const auto& kv) { return kv.second.conserved(); });
}

std::string group_key(LayerId layer, std::optional<RatId> rat) {
  std::string key(to_string(layer));
  key += ':';
  key += rat ? to_string(*rat) : std::string_view("none");
  return key;
}

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, int p) {
  if (sorted.empty()) throw KpiError("percentile of an empty sample");
  const auto n = static_cast<std::uint64_t>(sorted.size());
  std::uint64_t rank = (static_cast<std::uint64_t>(p) * n + 99) / 100;
  if (rank < 1) rank = 1;
  return sorted[rank - 1];
}

namespace {

struct Accumulator {
  GroupStats stats;
  std::vector<std::int64_t> latencies_us;

  void add(const KpiRecord& r) {
    ++stats.sent;
    switch (r.status) {
      case MessageStatus::delivered:
        ++stats.delivered;
        stats.delivered_bytes += r.bytes;
        latencies_us.push_back(*r.t_rx_us - r.t_tx_us);
        break;
      case MessageStatus::erased: ++stats.erased; break;
      case MessageStatus::dropped_no_coverage: ++stats.dropped_no_coverage; break;
      case MessageStatus::dropped_policy: ++stats.dropped_policy; break;
      case MessageStatus::deferred: ++stats.deferred; break;
      case MessageStatus::created: break;
    }
  }

  GroupStats finish(double duration_s) {
    GroupStats s = stats;
    s.pdr = s.sent ? static_cast<double>(s.delivered) / static_cast<double>(s.sent) : 0.0;
    s.goodput_bps = duration_s > 0.0 ? static_cast<double>(s.delivered_bytes) * 8.0 / duration_s : 0.0;
    if (!latencies_us.empty()) {
      std::sort(latencies_us.begin(), latencies_us.end());
      s.latency = LatencyPercentiles{nearest_rank(latencies_us, 50) / 1000.0,
                                     nearest_rank(latencies_us, 95) / 1000.0,
                                     nearest_rank(latencies_us, 99) / 1000.0};
    }
    return s;
  }
};

}  // namespace

Summary summarize(const std::vector<KpiRecord>& records, double duration_s) {
  std::map<std::string, Accumulator> groups;
  Accumulator run;
  for (const auto& r : records) {
    groups[group_key(r.layer, r.rat)].add(r);
    run.add(r);
  }
  Summary s;
  s.duration_s = duration_s;
  for (auto& [key, acc] : groups) s.groups.emplace(key, acc.finish(duration_s));
  s.run = run.finish(duration_s);
  return s;
}

std::string format_ms(std::int64_t us) {
  std::string out;
  if (us < 0) {
    out += '-';
    us = -us;
  }
  out += std::to_string(us / 1000);
  out += '.';
  const auto frac = std::to_string(us % 1000);
  out.append(3 - frac.size(), '0');
  out += frac;
  return out;
}

namespace {

nlohmann::json group_json(const GroupStats& g) {
  nlohmann::json j;
  j["sent"] = g.sent;
  j["delivered"] = g.delivered;
  j["erased"] = g.erased;
  j["dropped_no_coverage"] = g.dropped_no_coverage;
  j["dropped_policy"] = g.dropped_policy;
  j["deferred"] = g.deferred;
  j["delivered_bytes"] = g.delivered_bytes;
  j["pdr"] = g.pdr;
  j["goodput_bps"] = g.goodput_bps;
  if (g.latency) {
    j["latency_p50_ms"] = g.latency->p50_ms;
    j["latency_p95_ms"] = g.latency->p95_ms;
    j["latency_p99_ms"] = g.latency->p99_ms;
  } else {
    j["latency_p50_ms"] = nullptr;
    j["latency_p95_ms"] = nullptr;
    j["latency_p99_ms"] = nullptr;
  }
  return j;
}

}  // namespace

std::string summary_json(const Summary& summary) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, g] : summary.groups) j[key] = group_json(g);
  auto run = group_json(summary.run);
  run["duration_s"] = summary.duration_s;
  run["conserved"] = summary.conserved();
  for (const auto& [key, v] : summary.extras) run[key] = v;
  j["run"] = std::move(run);
  return j.dump(2) + "\n";
}

void write_outputs(const std::vector<KpiRecord>& records, const NameTable& names,
                   const Summary& summary, const std::filesystem::path& dir,
                   OutputFormats formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  if (formats.csv) {
    std::vector<const KpiRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const KpiRecord* a, const KpiRecord* b) {
      if (a->t_tx_us != b->t_tx_us) return a->t_tx_us < b->t_tx_us;
      return a->msg_id < b->msg_id;
    });

    const auto path = dir / "messages.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    std::string buf;
    buf.reserve(1 << 20);
    buf += kMessagesCsvHeader;
    buf += '\n';
    for (const KpiRecord* r : order) {
      buf += std::to_string(r->msg_id);
      buf += ',';
      buf += format_ms(r->t_tx_us);
      buf += ',';
      if (r->t_rx_us) buf += format_ms(*r->t_rx_us);
      buf += ',';
      buf += names.name(r->src);
      buf += ',';
      buf += names.name(r->dst);
      buf += ',';
      buf += r->rat ? to_string(*r->rat) : std::string_view("none");
      buf += ',';
      buf += to_string(r->layer);
      buf += ',';
      buf += to_string(r->service);
      buf += ',';
      buf += std::to_string(r->bytes);
      buf += ',';
      buf += to_string(r->status);
      buf += '\n';
      if (buf.size() > (1 << 20) - 256) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing " + path.string());
  }

  if (formats.json) {
    const auto path = dir / "summary.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << summary_json(summary);
    if (!out) throw IoError("failed writing " + path.string());
  }
}

namespace {

std::int64_t parse_ms(std::string_view s, std::size_t line) {
  bool neg = false;
  if (!s.empty() && s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  if (dot == std::string_view::npos || s.size() - dot - 1 != 3) {
    throw KpiError("messages.csv line " + std::to_string(line) + ": bad millisecond field");
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  const auto w = std::from_chars(s.data(), s.data() + dot, whole);
  const auto f = std::from_chars(s.data() + dot + 1, s.data() + s.size(), frac);
  if (w.ec != std::errc() || f.ec != std::errc() || w.ptr != s.data() + dot ||
      f.ptr != s.data() + s.size()) {
    throw KpiError("messages.csv line " + std::to_string(line) + ": bad millisecond field");
  }
  const std::int64_t us = whole * 1000 + frac;
  return neg ? -us : us;
}

template <typename T>
T parse_int(std::string_view s, std::size_t line) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw KpiError("messages.csv line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ParsedMessages read_messages_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  ParsedMessages out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) {
      if (line != kMessagesCsvHeader) throw KpiError("messages.csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view text(line);
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      f.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 10) throw KpiError("messages.csv line " + std::to_string(n) + ": expected 10 fields");
    KpiRecord r;
    r.msg_id = parse_int<std::uint64_t>(f[0], n);
    r.t_tx_us = parse_ms(f[1], n);
    if (!f[2].empty()) r.t_rx_us = parse_ms(f[2], n);
    r.src = out.names.intern(std::string(f[3]));
    r.dst = out.names.intern(std::string(f[4]));
    if (f[5] != "none") {
      r.rat = parse_rat(f[5]);
      if (!r.rat) throw KpiError("messages.csv line " + std::to_string(n) + ": unknown rat");
    }
    const auto layer = parse_layer(f[6]);
    const auto service = parse_service(f[7]);
    const auto status = parse_status(f[9]);
    if (!layer || !service || !status) {
      throw KpiError("messages.csv line " + std::to_string(n) + ": unknown enum value");
    }
    r.layer = *layer;
    r.service = *service;
    r.bytes = parse_int<std::uint32_t>(f[8], n);
    r.status = *status;
    out.records.push_back(r);
  }
  return out;
}

}  // namespace cits
