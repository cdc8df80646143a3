#include <gtest/gtest.h>

#include "cits/control_plane.hpp"
#include "cits/error.hpp"

using namespace cits;

namespace {

StreamDescriptor stream(LayerId layer, double rate, std::uint32_t id = 0) {
  StreamDescriptor d;
  d.id = id;
  d.layer = layer;
  d.rate_bps = rate;
  d.reliable = layer != LayerId::enh2;
  return d;
}

FogLoadState caps(double dsrc, double px, double cv2x, double mmwave) {
  FogLoadState s;
  s.caps_bps = {dsrc, px, cv2x, mmwave};
  return s;
}

RatAvailability avail(bool dsrc, bool px, bool cv2x, bool mmwave) {
  RatAvailability a;
  a.set(RatId::dsrc, dsrc);
  a.set(RatId::dsrc_px, px);
  a.set(RatId::cv2x, cv2x);
  a.set(RatId::mmwave, mmwave);
  return a;
}

Message msg(LayerId layer, GeoRelevance geo = GeoRelevance::local) {
  Message m;
  m.id = 1;
  m.bytes = 100;
  m.layer = layer;
  m.geo = geo;
  return m;
}

}  // namespace

TEST(Policy, DefaultsAndValidation) {
  PolicyConfig p;
  EXPECT_EQ(p.primary_rat(LayerId::base), RatId::dsrc);
  EXPECT_EQ(p.primary_rat(LayerId::enh1), RatId::cv2x);
  EXPECT_EQ(p.primary_rat(LayerId::enh2), RatId::mmwave);
  EXPECT_LT(p.rank(LayerId::base), p.rank(LayerId::enh1));
  EXPECT_LT(p.rank(LayerId::enh1), p.rank(LayerId::enh2));
  EXPECT_NO_THROW(validate(p));
  p.priority = {LayerId::base, LayerId::base, LayerId::enh2};
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.load_caps_bps[0] = -1.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.max_deferrals = 0;
  EXPECT_THROW(validate(p), ConfigError);
}

TEST(Admit, BaseAlwaysAdmitted) {
  PolicyConfig p;
  auto load = caps(0, 0, 0, 0);
  const auto d = service_engine_admit(stream(LayerId::base, 24e3), load, p);
  EXPECT_EQ(d.verdict, Verdict::admit);
  EXPECT_FALSE(d.reserves);
}

TEST(Admit, Enh2OverResidualRejected) {
  PolicyConfig p;
  auto load = caps(15e6, 33e6, 100e6, 100e6);
  const auto d = service_engine_admit(stream(LayerId::enh2, 150e6), load, p);
  EXPECT_EQ(d.verdict, Verdict::reject);
}

TEST(Admit, Enh1OnEmptyLoad) {
  PolicyConfig p;
  auto load = caps(15e6, 33e6, 100e6, 7e9);
  const auto d = service_engine_admit(stream(LayerId::enh1, 500e3), load, p);
  EXPECT_EQ(d.verdict, Verdict::admit);
  EXPECT_EQ(d.rat, RatId::cv2x);
  EXPECT_TRUE(d.reserves);
}

TEST(Admit, Enh1DefersOrMovesToPx) {
  PolicyConfig p;
  auto load = caps(15e6, 33e6, 1e6, 7e9);
  EXPECT_EQ(service_engine_admit(stream(LayerId::enh1, 2e6), load, p).verdict, Verdict::defer);
  p.px_enabled = true;
  const auto d = service_engine_admit(stream(LayerId::enh1, 2e6), load, p);
  EXPECT_EQ(d.verdict, Verdict::admit);
  EXPECT_EQ(d.rat, RatId::dsrc_px);
}

TEST(Admit, BatchHonorsPriorityAndNeverOvercommits) {
  PolicyConfig p;
  auto load = caps(15e6, 33e6, 1e6, 1e6);
  const auto e2 = stream(LayerId::enh2, 0.6e6, 1);
  const auto e1a = stream(LayerId::enh1, 0.6e6, 2);
  const auto e1b = stream(LayerId::enh1, 0.6e6, 3);
  const auto b = stream(LayerId::base, 24e3, 4);
  // Request order is deliberately reversed against the priority order.
  const auto d = admit_batch({{1, &e2}, {1, &e1b}, {0, &e1a}, {0, &b}}, load, p);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[3].verdict, Verdict::admit);  // base
  EXPECT_EQ(d[2].verdict, Verdict::admit);  // vehicle 0 comes first among Enh1
  EXPECT_EQ(d[1].verdict, Verdict::defer);
  EXPECT_EQ(d[0].verdict, Verdict::admit);  // separate mmWave budget
  for (const auto rat : kAllRats) EXPECT_LE(load.committed_bps[index_of(rat)], load.caps_bps[index_of(rat)]);
}

TEST(LoadState, CommitReleaseAndOvercommit) {
  auto load = caps(15e6, 33e6, 100e6, 7e9);
  load.commit(RatId::cv2x, 60e6);
  EXPECT_DOUBLE_EQ(load.residual(RatId::cv2x), 40e6);
  EXPECT_THROW(load.commit(RatId::cv2x, 50e6), Error);
  load.release(RatId::cv2x, 60e6);
  EXPECT_DOUBLE_EQ(load.residual(RatId::cv2x), 100e6);
}

TEST(LoadState, DefaultCaps) {
  std::array<RatProfile, kRatCount> profiles{profile_of(RatId::dsrc), profile_of(RatId::dsrc_px),
                                              profile_of(RatId::cv2x), profile_of(RatId::mmwave)};
  PolicyConfig p;
  const auto c = default_load_caps(profiles, {2, 2, 3, 4}, p);
  EXPECT_EQ(c[index_of(RatId::dsrc)], 15e6);
  EXPECT_EQ(c[index_of(RatId::cv2x)], 300e6);
  EXPECT_EQ(c[index_of(RatId::mmwave)], 4 * profiles[3].net_cap_bps);
  p.load_caps_bps[index_of(RatId::cv2x)] = 5e6;
  EXPECT_EQ(default_load_caps(profiles, {2, 2, 3, 4}, p)[index_of(RatId::cv2x)], 5e6);
}

TEST(Select, BaseOnDsrcWhenInRange) {
  PolicyConfig p;
  const auto s = access_controller_select(msg(LayerId::base), LayerId::base, RatId::dsrc,
                                          avail(true, false, true, true), caps(1, 1, 1, 1), 24e3, p);
  EXPECT_EQ(s.kind, SelectionKind::rat);
  EXPECT_EQ(s.rat, RatId::dsrc);
  EXPECT_EQ(s.mode, LinkMode::broadcast);
}

TEST(Select, BaseFallsBackToPc5) {
  PolicyConfig p;
  const auto s = access_controller_select(msg(LayerId::base), LayerId::base, RatId::dsrc,
                                          avail(false, false, true, false), caps(1, 1, 1, 1), 24e3, p);
  EXPECT_EQ(s.kind, SelectionKind::rat);
  EXPECT_EQ(s.rat, RatId::cv2x);
  EXPECT_EQ(s.mode, LinkMode::v2v);
}

TEST(Select, BaseWithNothingIsDropped) {
  PolicyConfig p;
  const auto s = access_controller_select(msg(LayerId::base), LayerId::base, RatId::dsrc,
                                          avail(false, false, false, false), caps(1, 1, 1, 1), 24e3, p);
  EXPECT_EQ(s.kind, SelectionKind::drop);
}

TEST(Select, Enh2WithoutMmwaveIsDropped) {
  PolicyConfig p;
  const auto s = access_controller_select(msg(LayerId::enh2), LayerId::enh2, RatId::mmwave,
                                          avail(true, true, true, false), caps(1e9, 1e9, 1e9, 1e9), 100e6, p);
  EXPECT_EQ(s.kind, SelectionKind::drop);
}

TEST(Select, Enh1FallsBackToPxOnlyWhenEnabledAndItFits) {
  PolicyConfig p;
  const auto load = caps(15e6, 33e6, 100e6, 7e9);
  auto s = access_controller_select(msg(LayerId::enh1), LayerId::enh1, RatId::cv2x, avail(true, true, false, true),
                                    load, 1e6, p);
  EXPECT_EQ(s.kind, SelectionKind::defer);
  p.px_enabled = true;
  s = access_controller_select(msg(LayerId::enh1), LayerId::enh1, RatId::cv2x, avail(true, true, false, true), load,
                               1e6, p);
  EXPECT_EQ(s.kind, SelectionKind::rat);
  EXPECT_EQ(s.rat, RatId::dsrc_px);
  EXPECT_TRUE(s.moved_to_px);
  s = access_controller_select(msg(LayerId::enh1), LayerId::enh1, RatId::cv2x, avail(true, true, false, true), load,
                               50e6, p);
  EXPECT_EQ(s.kind, SelectionKind::defer);
}

TEST(Select, DefaultMappingWithFullCoverage) {
  PolicyConfig p;
  const auto all = avail(true, false, true, true);
  const auto load = caps(15e6, 33e6, 100e6, 7e9);
  for (const auto layer : {LayerId::base, LayerId::enh1, LayerId::enh2}) {
    const auto s = access_controller_select(msg(layer), layer, p.primary_rat(layer), all, load, 1e3, p);
    EXPECT_EQ(s.kind, SelectionKind::rat);
    EXPECT_EQ(s.rat, p.primary_rat(layer));
  }
}

TEST(Escalate, CityMessageOnLocalRatIsDuplicated) {
  PolicyConfig p;
  auto m = msg(LayerId::enh1, GeoRelevance::city);
  m.rat = RatId::dsrc_px;
  m.dst = 5;
  const auto dup = escalate_geo(m, p, 42);
  ASSERT_TRUE(dup);
  EXPECT_EQ(dup->id, 42u);
  EXPECT_NE(dup->id, m.id);
  EXPECT_EQ(dup->rat, RatId::cv2x);
  EXPECT_EQ(dup->dst, kBroadcast);
  EXPECT_EQ(dup->bytes, m.bytes);
}

TEST(Escalate, LocalMessageStaysLocal) {
  PolicyConfig p;
  auto m = msg(LayerId::base, GeoRelevance::local);
  m.rat = RatId::dsrc;
  EXPECT_FALSE(escalate_geo(m, p, 2));
}

TEST(Escalate, DisabledIsIdentity) {
  PolicyConfig p;
  p.escalation_enabled = false;
  auto m = msg(LayerId::enh1, GeoRelevance::city);
  m.rat = RatId::dsrc;
  EXPECT_FALSE(escalate_geo(m, p, 2));
}

TEST(Escalate, AlreadyOnCv2xNoDuplicate) {
  PolicyConfig p;
  auto m = msg(LayerId::enh1, GeoRelevance::city);
  m.rat = RatId::cv2x;
  EXPECT_FALSE(escalate_geo(m, p, 2));
}
