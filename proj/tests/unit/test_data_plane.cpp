#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cits/data_plane.hpp"
#include "cits/error.hpp"
#include "cits/rng.hpp"

using namespace cits;

namespace {

const StreamDescriptor* find(const std::vector<StreamDescriptor>& streams, const std::string& type) {
  for (const auto& s : streams) {
    if (s.msg_type == type) return &s;
  }
  return nullptr;
}

}  // namespace

TEST(ServiceStreams, EmergencyRoutingLidar) {
  MessageCatalog cat;
  RngStream rng(1, "rates");
  const auto streams = service_streams(ServiceId::emergency_routing, cat, rng);
  const auto* lidar = find(streams, "lidar_raw");
  ASSERT_NE(lidar, nullptr);
  EXPECT_GE(lidar->rate_bps, 50e6);
  EXPECT_LE(lidar->rate_bps, 250e6);
  EXPECT_EQ(lidar->layer, LayerId::enh2);
  EXPECT_FALSE(lidar->reliable);
  EXPECT_EQ(lidar->geo, GeoRelevance::fog_area);
  // Disabled raw sources stay out of the stream list.
  EXPECT_EQ(find(streams, "camera_raw"), nullptr);
  EXPECT_EQ(find(streams, "radar_raw"), nullptr);
}

TEST(ServiceStreams, TrafficPlanningCavPositions) {
  MessageCatalog cat;
  RngStream rng(2, "rates");
  const auto streams = service_streams(ServiceId::traffic_planning, cat, rng);
  const auto* cav = find(streams, "cav_positions");
  ASSERT_NE(cav, nullptr);
  EXPECT_GE(cav->rate_bps, 10e3);
  EXPECT_LE(cav->rate_bps, 800e3);
  EXPECT_EQ(cav->geo, GeoRelevance::city);
}

TEST(ServiceStreams, MultimodalParking) {
  MessageCatalog cat;
  RngStream rng(3, "rates");
  const auto streams = service_streams(ServiceId::multimodal_commuting, cat, rng);
  const auto* parking = find(streams, "parking");
  ASSERT_NE(parking, nullptr);
  EXPECT_GE(parking->rate_bps, 10e3);
  EXPECT_LE(parking->rate_bps, 10e6);
}

TEST(ServiceStreams, PeriodFollowsPayloadAndRate) {
  MessageCatalog cat;
  RngStream rng(4, "rates");
  std::uint32_t next = 100;
  const auto streams = service_streams(ServiceId::emergency_routing, cat, rng, next);
  std::set<std::uint32_t> ids;
  for (const auto& s : streams) {
    EXPECT_NEAR(s.period_s, s.payload_bytes * 8.0 / s.rate_bps, 1e-15);
    EXPECT_EQ(s.payload_bytes, cat.payloads.for_layer(s.layer));
    EXPECT_NO_THROW(validate(s, cat));
    ids.insert(s.id);
  }
  EXPECT_EQ(ids.size(), streams.size());
  EXPECT_EQ(*ids.begin(), 100u);
}

TEST(ServiceStreams, RatesAreFixedPerRunAndSeed) {
  MessageCatalog cat;
  RngStream a(9, "vehicle/v1/rates");
  RngStream b(9, "vehicle/v1/rates");
  const auto x = service_streams(ServiceId::traffic_planning, cat, a);
  const auto y = service_streams(ServiceId::traffic_planning, cat, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].rate_bps, y[i].rate_bps);
}

TEST(ClassifyLayer, Examples) {
  MessageCatalog cat;
  EXPECT_EQ(classify_layer("bsm", cat), LayerId::base);
  StreamDescriptor bb;
  bb.msg_type = "bounding_boxes";
  bb.rate_bps = 500e3;
  EXPECT_EQ(classify_layer(bb, cat), LayerId::enh1);
  StreamDescriptor lidar;
  lidar.msg_type = "lidar_raw";
  lidar.rate_bps = 150e6;
  EXPECT_EQ(classify_layer(lidar, cat), LayerId::enh2);
  EXPECT_THROW(classify_layer("teleport", cat), Error);
}

TEST(ClassifyLayer, TotalOverCatalog) {
  MessageCatalog cat;
  for (const auto& e : cat.entries()) {
    const auto layer = classify_layer(e.msg_type, cat);
    EXPECT_EQ(layer, e.layer) << e.msg_type;
  }
  for (const char* t : {"camera_raw", "radar_raw"}) EXPECT_EQ(classify_layer(t, cat), LayerId::enh2);
  for (const char* t : {"map_grid", "routes", "disruption", "trajectory", "parking"}) {
    EXPECT_EQ(classify_layer(t, cat), LayerId::enh1);
  }
}

TEST(ClassifyLayer, DeclaredLayerForNewTypes) {
  MessageCatalog cat;
  CatalogEntry e;
  e.msg_type = "thermal_raw";
  e.service = ServiceId::emergency_routing;
  e.layer = LayerId::enh2;
  e.rate_bps = {1e6, 2e6};
  e.reliable = false;
  cat.upsert(e);
  EXPECT_EQ(classify_layer("thermal_raw", cat), LayerId::enh2);
}

TEST(Catalog, Enh2NeverReliableAndBaseLocal) {
  MessageCatalog cat;
  for (const auto& e : cat.entries()) {
    if (e.layer == LayerId::enh2) {
      EXPECT_FALSE(e.reliable) << e.msg_type;
    }
    if (e.layer == LayerId::base) {
      EXPECT_EQ(e.geo, GeoRelevance::local) << e.msg_type;
    }
  }
}

TEST(Catalog, RawSourcesReachGbpsWhenEnabled) {
  MessageCatalog cat;
  const auto* camera = cat.find(ServiceId::emergency_routing, "camera_raw");
  const auto* radar = cat.find(ServiceId::emergency_routing, "radar_raw");
  ASSERT_TRUE(camera && radar);
  EXPECT_GT(camera->rate_bps.hi, 400e6 - 1);
  EXPECT_EQ(radar->rate_bps.hi, 2800e6);
  auto enabled = *radar;
  enabled.enabled = true;
  cat.upsert(enabled);
  RngStream rng(1, "r");
  const auto streams = service_streams(ServiceId::emergency_routing, cat, rng);
  double total = 0;
  for (const auto& s : streams) total += s.layer == LayerId::enh2 ? s.rate_bps : 0.0;
  EXPECT_GE(total, 2800e6);
}

TEST(Bsm, StreamRateAndCount) {
  const auto d = bsm_descriptor(0, 0.1, 300);
  EXPECT_NEAR(d.rate_bps, 24000.0, 1e-9);
  int count = 0;
  for (int k = 0; k * d.period_s < 1.0; ++k) ++count;
  EXPECT_EQ(count, 10);
}

TEST(Bsm, PeriodFloor) {
  EXPECT_THROW(check_bsm_period(0.05), Error);
  EXPECT_NO_THROW(check_bsm_period(0.1));
  EXPECT_THROW(bsm_descriptor(0, 0.05, 300), Error);
}

TEST(Bsm, TickCarriesSnapshot) {
  const auto d = bsm_descriptor(3, 0.1, 300);
  const KinematicState st{{12, -4}, 17.5, 1.25};
  const auto b = bsm_tick(d, 9, st, 2.3, 77);
  EXPECT_EQ(b.message.id, 77u);
  EXPECT_EQ(b.message.dst, kBroadcast);
  EXPECT_EQ(b.message.bytes, 300u);
  EXPECT_EQ(b.message.layer, LayerId::base);
  EXPECT_EQ(b.snapshot.position, st.position);
  EXPECT_EQ(b.snapshot.speed, 17.5);
  EXPECT_EQ(b.snapshot.heading, 1.25);
}

TEST(SampleRate, BoundsAndDegenerate) {
  RngStream rng(4, "s");
  for (int i = 0; i < 1000; ++i) {
    const double r = sample_stream_rate({50e6, 250e6}, rng);
    ASSERT_GE(r, 50e6);
    ASSERT_LE(r, 250e6);
  }
  EXPECT_EQ(sample_stream_rate({7.0, 7.0}, rng), 7.0);
  EXPECT_THROW(sample_stream_rate({2.0, 1.0}, rng), Error);
}

TEST(SampleRate, DisruptionDrawsInsideTableRange) {
  MessageCatalog cat;
  const auto* e = cat.find(ServiceId::multimodal_commuting, "disruption");
  ASSERT_NE(e, nullptr);
  RngStream rng(6, "disruption");
  for (int i = 0; i < 10000; ++i) {
    const double r = sample_stream_rate(e->rate_bps, rng);
    ASSERT_GE(r, 30e3);
    ASSERT_LE(r, 100e3);
  }
}

TEST(Validate, RejectsLayerViolations) {
  MessageCatalog cat;
  StreamDescriptor d;
  d.msg_type = "lidar_raw";
  d.service = ServiceId::emergency_routing;
  d.layer = LayerId::enh2;
  d.rate_bps = 100e6;
  d.geo = GeoRelevance::fog_area;
  d.reliable = true;
  d.payload_bytes = 65536;
  d.period_s = 65536 * 8 / 100e6;
  EXPECT_THROW(validate(d, cat), Error);
  d.reliable = false;
  EXPECT_NO_THROW(validate(d, cat));
  d.rate_bps = 300e6;
  EXPECT_THROW(validate(d, cat), Error);
}

TEST(Message, StatusTransitions) {
  EXPECT_TRUE(valid_transition(MessageStatus::created, MessageStatus::delivered));
  EXPECT_TRUE(valid_transition(MessageStatus::created, MessageStatus::deferred));
  EXPECT_FALSE(valid_transition(MessageStatus::delivered, MessageStatus::erased));
  EXPECT_FALSE(valid_transition(MessageStatus::created, MessageStatus::created));
}
