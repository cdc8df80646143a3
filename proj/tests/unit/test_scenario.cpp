#include <gtest/gtest.h>

#include <string>

#include "cits/error.hpp"
#include "cits/scenario.hpp"

using namespace cits;

namespace {

const std::string kMinimal = R"({
  "duration_s": 10,
  "fog_areas": [{"id": "A", "center": [0, 0]}],
  "rsus": [{"id": "r1", "rat": "dsrc", "position": [0, 0], "area": "A"}],
  "vehicles": [{"id": "v1", "position": [100, 0]}]
})";

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

// Minimal document with one extra top-level member spliced in.
std::string with(const std::string& member) {
  return R"({"duration_s": 10, "fog_areas": [{"id": "A", "center": [0, 0]}],
            "rsus": [{"id": "r1", "rat": "dsrc", "position": [0, 0], "area": "A"}],
            "vehicles": [{"id": "v1", "position": [100, 0]}], )" +
         member + "}";
}

}  // namespace

TEST(ParseConfig, MinimalGetsDefaults) {
  const auto s = parse_config(kMinimal);
  EXPECT_EQ(s.duration_s, 10.0);
  ASSERT_EQ(s.vehicles.size(), 1u);
  EXPECT_TRUE(s.vehicles[0].services.empty());
  EXPECT_EQ(s.policy.bsm_period_s, 0.1);
  EXPECT_EQ(s.policy.handover_period_s, 0.1);
  EXPECT_EQ(s.policy.cloud_sync_period_s, 1.0);
  EXPECT_TRUE(s.policy.assist);
  EXPECT_EQ(s.policy.control.primary_rat(LayerId::enh2), RatId::mmwave);
  EXPECT_EQ(s.profile(RatId::dsrc).net_cap_bps, 15e6);
  EXPECT_EQ(s.fog_areas[0].cloud_latency_ms, 50.0);
}

TEST(ParseConfig, UndefinedAreaNamesPath) {
  const std::string text = R"({"duration_s": 10, "fog_areas": [{"id": "A", "center": [0, 0]}],
    "rsus": [{"id": "r1", "rat": "dsrc", "position": [0, 0], "area": "Z"}], "vehicles": []})";
  EXPECT_EQ(error_path(text), "rsus[0].area");
}

TEST(ParseConfig, BsmPeriodBelowFloor) {
  EXPECT_EQ(error_path(with(R"("policy": {"bsm_period_s": 0.05})")), "policy.bsm_period_s");
}

TEST(ParseConfig, ZeroDurationRejected) {
  EXPECT_EQ(error_path(R"({"duration_s": 0, "fog_areas": [{"id": "A", "center": [0, 0]}]})"), "duration_s");
}

TEST(ParseConfig, UnknownKeysRejected) {
  EXPECT_EQ(error_path(with(R"("policy": {"asist": true})")), "policy.asist");
  EXPECT_EQ(error_path(with(R"("colour": 1)")), "colour");
  const std::string nested = R"({"duration_s": 1, "fog_areas": [{"id": "A", "center": [0, 0], "radius": 3}]})";
  EXPECT_EQ(error_path(nested), "fog_areas[0].radius");
}

TEST(ParseConfig, TypeErrorsNamePath) {
  EXPECT_EQ(error_path(with(R"("seed": -4)")), "seed");
  EXPECT_EQ(error_path(with(R"("rat_overrides": {"dsrc": {"range_m": "far"}})")), "rat_overrides.dsrc.range_m");
  EXPECT_EQ(error_path(with(R"("policy": {"layer_rat_map": {"enh1": "wifi"}})")), "policy.layer_rat_map.enh1");
  EXPECT_EQ(error_path("{not json"), "");
}

TEST(ParseConfig, RsuAreaMustMatchPartition) {
  const std::string text = R"({"duration_s": 1,
    "fog_areas": [{"id": "A", "center": [0, 0]}, {"id": "B", "center": [1000, 0]}],
    "rsus": [{"id": "r1", "rat": "dsrc", "position": [900, 0], "area": "A"}]})";
  EXPECT_EQ(error_path(text), "rsus[0].area");
}

TEST(ParseConfig, RsuAreaFilledWhenOmitted) {
  const auto s = parse_config(R"({"duration_s": 1,
    "fog_areas": [{"id": "A", "center": [0, 0]}, {"id": "B", "center": [1000, 0]}],
    "rsus": [{"id": "r1", "rat": "cv2x", "position": [900, 0]}]})");
  EXPECT_EQ(s.rsus[0].area, "B");
}

TEST(ParseConfig, DuplicateIdsRejected) {
  const std::string text = R"({"duration_s": 1, "fog_areas": [{"id": "A", "center": [0, 0]}],
    "vehicles": [{"id": "v"}, {"id": "v"}]})";
  EXPECT_EQ(error_path(text), "vehicles[1].id");
}

TEST(ParseConfig, OverridesApply) {
  const auto s = parse_config(with(R"(
    "rat_overrides": {"cv2x": {"net_cap_bps": 2e8, "e2e_v2i_ms": [31, 49]}, "mmwave": {"mobility_limit_kmh": null}},
    "mmwave": {"overhead_with_assist": 0.1, "n_nlos": 4.5},
    "dsrc_model": {"gamma": 2.0},
    "payload_defaults": {"enh2": 32768},
    "catalog": [{"msg_type": "radar_raw", "service": "emergency_routing", "enabled": true},
                {"msg_type": "pothole", "service": "multimodal_commuting", "layer": "enh1",
                 "rate_bps": [1000, 2000], "geo": "city"}],
    "policy": {"px_enabled": true, "escalation_enabled": false, "assist": "off", "max_deferrals": 4,
               "priority": ["base", "enh2", "enh1"], "load_caps_bps": {"mmwave": 1e10},
               "layer_rat_map": {"enh1": "dsrc_px"}})"));
  EXPECT_EQ(s.profile(RatId::cv2x).net_cap_bps, 2e8);
  EXPECT_EQ(s.profile(RatId::cv2x).e2e_v2i_ms.lo, 31.0);
  EXPECT_FALSE(s.profile(RatId::mmwave).mobility_limit_kmh);
  EXPECT_EQ(s.models.mmwave.overhead_with_assist, 0.1);
  EXPECT_EQ(s.models.mmwave.n_nlos, 4.5);
  EXPECT_EQ(s.models.dsrc.gamma, 2.0);
  EXPECT_EQ(s.catalog.payloads.enh2, 32768u);
  EXPECT_TRUE(s.catalog.find(ServiceId::emergency_routing, "radar_raw")->enabled);
  ASSERT_NE(s.catalog.find(ServiceId::multimodal_commuting, "pothole"), nullptr);
  EXPECT_TRUE(s.policy.control.px_enabled);
  EXPECT_FALSE(s.policy.control.escalation_enabled);
  EXPECT_FALSE(s.policy.assist);
  EXPECT_EQ(s.policy.control.max_deferrals, 4);
  EXPECT_EQ(s.policy.control.priority[1], LayerId::enh2);
  EXPECT_EQ(s.policy.control.load_caps_bps[index_of(RatId::mmwave)], 1e10);
  EXPECT_EQ(s.policy.control.primary_rat(LayerId::enh1), RatId::dsrc_px);
}

TEST(ParseConfig, LayerInvariantsOnCatalogEntries) {
  EXPECT_EQ(error_path(with(R"("catalog": [{"msg_type": "lidar_raw", "service": "emergency_routing", "reliable": true}])")),
            "catalog[0].reliable");
  EXPECT_EQ(error_path(with(R"("catalog": [{"msg_type": "x", "service": "emergency_routing"}])")), "catalog[0].layer");
  EXPECT_EQ(error_path(with(R"("catalog": [{"msg_type": "x", "service": "emergency_routing", "layer": "base",
                                         "rate_bps": [1, 1], "geo": "city"}])")),
            "catalog[0].geo");
}

TEST(ParseConfig, MmwaveInvariantsEnforced) {
  EXPECT_THROW(parse_config(with(R"("mmwave": {"n_los": 3.0})")), ConfigError);
  EXPECT_THROW(parse_config(with(R"("mmwave": {"n_nlos": 6.0})")), ConfigError);
}

TEST(Serialize, RoundTripsToEquivalentScenario) {
  const auto s = parse_config(with(R"("policy": {"px_enabled": true, "load_caps_bps": {"cv2x": 5e7}},
    "catalog": [{"msg_type": "pothole", "service": "multimodal_commuting", "layer": "enh1", "rate_bps": [1000, 2000], "geo": "city"}],
    "rat_overrides": {"mmwave": {"mobility_limit_kmh": null}})"));
  const auto text = serialize(s);
  const auto again = parse_config(text);
  EXPECT_EQ(serialize(again), text);
  EXPECT_EQ(again.policy.control.load_caps_bps, s.policy.control.load_caps_bps);
  EXPECT_EQ(again.catalog.entries().size(), s.catalog.entries().size());
  EXPECT_FALSE(again.profile(RatId::mmwave).mobility_limit_kmh);
}

TEST(Serialize, ReferenceScenarioRoundTrips) {
  const auto s = load_config(std::string(CITS_SCENARIO_DIR) + "/desk.json");
  EXPECT_EQ(serialize(parse_config(serialize(s))), serialize(s));
  EXPECT_EQ(s.vehicles.size(), 50u);
  EXPECT_EQ(s.fog_areas.size(), 2u);
}

TEST(LoadConfig, ResolvesTracePathRelativeToFile) {
  const auto s = load_config(std::string(CITS_TEST_DATA) + "/trace_driven.json");
  ASSERT_TRUE(s.trace_file);
  EXPECT_TRUE(std::filesystem::exists(*s.trace_file));
}

TEST(LoadConfig, MissingFile) { EXPECT_THROW(load_config("/nonexistent/scenario.json"), IoError); }
