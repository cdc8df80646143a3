#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cits/control_plane.hpp"
#include "cits/data_plane.hpp"
#include "cits/rat.hpp"
#include "cits/topology.hpp"

namespace cits {

struct FogAreaConfig {
  std::string id;
  Position center;
  double cloud_latency_ms = 50.0;
};

struct RsuConfig {
  std::string id;
  RatId rat = RatId::dsrc;
  Position position;
  std::string area;  // filled from the Voronoi assignment when omitted
};

struct VehicleConfig {
  std::string id;
  Position position;
  double speed_mps = 0.0;
  double heading_rad = 0.0;
  std::vector<Position> route;
  bool loop = false;
  bool trace = false;  // kinematics come from the scenario trace file
  std::vector<ServiceId> services;
};

struct SimPolicy {
  PolicyConfig control;
  bool assist = true;
  double bsm_period_s = 0.1;
  std::uint32_t bsm_payload_bytes = 300;
  double handover_period_s = 0.1;
  double cloud_sync_period_s = 1.0;
  double mobility_step_s = 0.1;
  double track_staleness_s = 1.0;
  double max_queue_delay_ms = 100.0;
};

struct Scenario {
  double duration_s = 0.0;
  std::uint64_t seed = 1;
  std::vector<FogAreaConfig> fog_areas;
  std::vector<RsuConfig> rsus;
  std::vector<VehicleConfig> vehicles;
  std::optional<std::filesystem::path> trace_file;
  std::array<RatProfile, kRatCount> profiles = {profile_of(RatId::dsrc), profile_of(RatId::dsrc_px),
                                                profile_of(RatId::cv2x), profile_of(RatId::mmwave)};
  RatModels models;
  MessageCatalog catalog;
  SimPolicy policy;

  const RatProfile& profile(RatId rat) const { return profiles[index_of(rat)]; }
};

// Parses and validates a scenario document. Unknown keys are rejected and
// every error names its JSON path (ConfigError::path). Relative trace paths
// resolve against base_dir.
Scenario parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
Scenario load_config(const std::filesystem::path& file);

// Checks cross-references and invariants of an in-memory scenario.
void validate(const Scenario& scenario);

// Effective configuration with every default written out; parse_config of
// the result yields an equivalent scenario.
std::string serialize(const Scenario& scenario);

}  // namespace cits
