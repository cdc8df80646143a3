#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cits/error.hpp"
#include "cits/kpi.hpp"
#include "cits/rng.hpp"
#include "json.hpp"

using namespace cits;
namespace fs = std::filesystem;

namespace {

KpiRecord rec(std::uint64_t id, std::int64_t tx_us, std::optional<std::int64_t> rx_us, MessageStatus status,
              LayerId layer = LayerId::base, std::optional<RatId> rat = RatId::dsrc, std::uint32_t bytes = 300) {
  KpiRecord r;
  r.msg_id = id;
  r.t_tx_us = tx_us;
  r.t_rx_us = rx_us;
  r.status = status;
  r.layer = layer;
  r.rat = rat;
  r.bytes = bytes;
  r.src = 1;
  return r;
}

fs::path temp_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("cits_kpi_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Sink, FirstRecord) {
  KpiSink s;
  s.record_outcome(rec(1, 0, 100, MessageStatus::delivered));
  EXPECT_EQ(s.size(), 1u);
}

TEST(Sink, DuplicateIdRejected) {
  KpiSink s;
  s.record_outcome(rec(1, 0, 100, MessageStatus::delivered));
  EXPECT_THROW(s.record_outcome(rec(1, 5, std::nullopt, MessageStatus::erased)), KpiError);
  s.record_outcome(rec(1ULL << 40, 0, std::nullopt, MessageStatus::erased));
  EXPECT_THROW(s.record_outcome(rec(1ULL << 40, 0, std::nullopt, MessageStatus::erased)), KpiError);
}

TEST(Sink, ReceiveBeforeSendRejected) {
  KpiSink s;
  EXPECT_THROW(s.record_outcome(rec(1, 100, 50, MessageStatus::delivered)), KpiError);
  EXPECT_THROW(s.record_outcome(rec(2, 100, std::nullopt, MessageStatus::delivered)), KpiError);
  EXPECT_THROW(s.record_outcome(rec(3, 100, 200, MessageStatus::erased)), KpiError);
  EXPECT_THROW(s.record_outcome(rec(4, 100, std::nullopt, MessageStatus::created)), KpiError);
}

TEST(Summarize, PdrRatio) {
  std::vector<KpiRecord> rs;
  for (int i = 0; i < 10; ++i) {
    rs.push_back(i < 9 ? rec(i + 1, 0, 1000, MessageStatus::delivered) : rec(i + 1, 0, std::nullopt, MessageStatus::erased));
  }
  const auto s = summarize(rs, 1.0);
  const auto& g = s.groups.at("base:dsrc");
  EXPECT_EQ(g.sent, 10u);
  EXPECT_EQ(g.delivered, 9u);
  EXPECT_DOUBLE_EQ(g.pdr, 0.9);
  EXPECT_DOUBLE_EQ(g.goodput_bps, 9 * 300 * 8 / 1.0);
}

TEST(Summarize, EmptyGroupsOmitted) {
  const auto s = summarize({rec(1, 0, 10, MessageStatus::delivered)}, 1.0);
  EXPECT_EQ(s.groups.size(), 1u);
  EXPECT_FALSE(s.groups.count("enh2:mmwave"));
}

TEST(Summarize, NearestRankPercentiles) {
  std::vector<KpiRecord> rs;
  for (int i = 1; i <= 100; ++i) rs.push_back(rec(i, 0, i * 1000, MessageStatus::delivered));
  const auto s = summarize(rs, 1.0);
  const auto& lat = *s.groups.at("base:dsrc").latency;
  // Nearest rank: ceil(p/100 * n)-th smallest.
  EXPECT_DOUBLE_EQ(lat.p50_ms, 50.0);
  EXPECT_DOUBLE_EQ(lat.p95_ms, 95.0);
  EXPECT_DOUBLE_EQ(lat.p99_ms, 99.0);
}

TEST(Summarize, NearestRankOracle) {
  RngStream rng(3, "lat");
  for (int n : {1, 2, 3, 7, 19, 101, 1000}) {
    std::vector<std::int64_t> v;
    for (int i = 0; i < n; ++i) v.push_back(static_cast<std::int64_t>(rng.uniform(0, 1e6)));
    std::sort(v.begin(), v.end());
    for (int p : {1, 50, 95, 99, 100}) {
      const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
      EXPECT_EQ(nearest_rank(v, p), v[std::max<std::size_t>(rank, 1) - 1]) << n << " " << p;
    }
  }
}

TEST(Summarize, ConservationAndOrderInsensitivity) {
  RngStream rng(4, "mix");
  std::vector<KpiRecord> rs;
  const MessageStatus statuses[] = {MessageStatus::delivered, MessageStatus::erased, MessageStatus::dropped_no_coverage,
                                    MessageStatus::dropped_policy, MessageStatus::deferred};
  for (int i = 0; i < 2000; ++i) {
    const auto st = statuses[rng.next_u64() % 5];
    const auto layer = static_cast<LayerId>(rng.next_u64() % 3);
    const std::int64_t tx = static_cast<std::int64_t>(rng.uniform(0, 1e7));
    rs.push_back(rec(i + 1, tx, st == MessageStatus::delivered ? std::optional<std::int64_t>(tx + 500 + i) : std::nullopt,
                     st, layer, st == MessageStatus::deferred ? std::nullopt : std::optional<RatId>(RatId::cv2x)));
  }
  const auto a = summarize(rs, 10.0);
  EXPECT_TRUE(a.conserved());
  EXPECT_TRUE(a.run.conserved());
  for (const auto& [k, g] : a.groups) {
    EXPECT_TRUE(g.conserved()) << k;
    EXPECT_GE(g.pdr, 0.0);
    EXPECT_LE(g.pdr, 1.0);
    if (g.latency) {
      EXPECT_LE(g.latency->p50_ms, g.latency->p95_ms);
      EXPECT_LE(g.latency->p95_ms, g.latency->p99_ms);
    }
  }
  auto shuffled = rs;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 777, shuffled.end());
  EXPECT_EQ(summary_json(summarize(shuffled, 10.0)), summary_json(a));
}

TEST(FormatMs, ThreeDecimals) {
  EXPECT_EQ(format_ms(0), "0.000");
  EXPECT_EQ(format_ms(1), "0.001");
  EXPECT_EQ(format_ms(1234567), "1234.567");
  EXPECT_EQ(format_ms(-1500), "-1.500");
}

TEST(Outputs, EmptyRun) {
  const auto dir = temp_dir("empty");
  NameTable names;
  write_outputs({}, names, summarize({}, 5.0), dir, {});
  EXPECT_EQ(slurp(dir / "messages.csv"), std::string(kMessagesCsvHeader) + "\n");
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j["run"]["sent"], 0);
  EXPECT_EQ(j["run"]["delivered"], 0);
  EXPECT_EQ(j.size(), 1u);
}

TEST(Outputs, DeterministicAndJsonOnly) {
  NameTable names;
  const auto v = names.intern("veh");
  std::vector<KpiRecord> rs{rec(2, 100, 900, MessageStatus::delivered), rec(1, 100, std::nullopt, MessageStatus::erased)};
  for (auto& r : rs) r.src = v;
  const auto s = summarize(rs, 1.0);
  const auto a = temp_dir("a");
  const auto b = temp_dir("b");
  write_outputs(rs, names, s, a, {});
  write_outputs(rs, names, s, b, {});
  EXPECT_EQ(slurp(a / "messages.csv"), slurp(b / "messages.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  const auto c = temp_dir("c");
  write_outputs(rs, names, s, c, {false, true});
  EXPECT_FALSE(fs::exists(c / "messages.csv"));
  EXPECT_TRUE(fs::exists(c / "summary.json"));

  const auto csv = slurp(a / "messages.csv");
  EXPECT_EQ(csv,
            "msg_id,t_tx_ms,t_rx_ms,src,dst,rat,layer,service,bytes,status\n"
            "1,0.100,,veh,broadcast,dsrc,base,safety_core,300,erased\n"
            "2,0.100,0.900,veh,broadcast,dsrc,base,safety_core,300,delivered\n");
}

TEST(Outputs, CsvRoundTripsRecordMultiset) {
  NameTable names;
  names.intern("a");
  names.intern("rsu-1");
  RngStream rng(5, "csv");
  std::vector<KpiRecord> rs;
  for (int i = 0; i < 500; ++i) {
    const bool ok = rng.bernoulli(0.6);
    const std::int64_t tx = static_cast<std::int64_t>(rng.uniform(0, 6e7));
    auto r = rec(i + 1, tx, ok ? std::optional<std::int64_t>(tx + 1234) : std::nullopt,
                 ok ? MessageStatus::delivered : MessageStatus::deferred, LayerId::enh1,
                 ok ? std::optional<RatId>(RatId::dsrc_px) : std::nullopt, 1500);
    r.src = 1;
    r.dst = i % 2 ? 2 : kBroadcast;
    r.service = ServiceId::multimodal_commuting;
    rs.push_back(r);
  }
  const auto dir = temp_dir("rt");
  write_outputs(rs, names, summarize(rs, 60.0), dir, {true, false});
  const auto parsed = read_messages_csv(dir / "messages.csv");
  ASSERT_EQ(parsed.records.size(), rs.size());
  auto key = [](const KpiRecord& r) { return r.msg_id; };
  auto sorted = parsed.records;
  std::sort(sorted.begin(), sorted.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& x = rs[i];
    const auto& y = sorted[i];
    EXPECT_EQ(x.msg_id, y.msg_id);
    EXPECT_EQ(x.t_tx_us, y.t_tx_us);
    EXPECT_EQ(x.t_rx_us, y.t_rx_us);
    EXPECT_EQ(names.name(x.src), parsed.names.name(y.src));
    EXPECT_EQ(names.name(x.dst), parsed.names.name(y.dst));
    EXPECT_EQ(x.rat, y.rat);
    EXPECT_EQ(x.layer, y.layer);
    EXPECT_EQ(x.service, y.service);
    EXPECT_EQ(x.bytes, y.bytes);
    EXPECT_EQ(x.status, y.status);
  }
}

TEST(Outputs, UnwritableDirectory) {
  NameTable names;
  EXPECT_THROW(write_outputs({}, names, summarize({}, 1.0), "/proc/cits_cannot_write_here", {}), IoError);
}
