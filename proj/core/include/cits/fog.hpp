#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cits/control_plane.hpp"
#include "cits/topology.hpp"
#include "cits/trace.hpp"

namespace cits {

struct TrackEntry {
  std::uint32_t vehicle = 0;
  double last_bsm_time = 0.0;
  Position position;
  double speed = 0.0;
  double heading = 0.0;
};

enum class CloudRecordKind : unsigned char { admitted, dropped, escalated };

struct CloudRecord {
  CloudRecordKind kind = CloudRecordKind::admitted;
  LayerId layer = LayerId::base;
};

// Aggregates only; no per-message payloads leave the Fog Area.
struct CloudBatch {
  double t_s = 0.0;  // arrival time at the cloud
  std::string area;
  std::size_t vehicles = 0;
  std::array<std::uint64_t, kLayerCount> admitted{};
  std::array<std::uint64_t, kLayerCount> dropped{};
  std::uint64_t escalated = 0;
  std::size_t records = 0;
};

struct FogOrchestratorState {
  std::size_t area = 0;
  std::string area_id;
  double cloud_latency_ms = 50.0;
  std::set<std::uint32_t> registered;
  std::map<std::uint32_t, TrackEntry> tracks;
  FogLoadState load;
  std::vector<CloudRecord> cloud_buffer;
};

// Upserts the sender's track entry; last_bsm_time is the delivery time.
void register_bsm(FogOrchestratorState& fo, std::uint32_t vehicle, const KinematicState& snapshot,
                  double delivered_at);

bool is_fresh(const TrackEntry& entry, double t, double staleness_s);

// Dead reckoning from the last BSM. Throws Error when the entry is older
// than staleness_s or t_query precedes the BSM.
Position predict_position(const TrackEntry& entry, double t_query, double staleness_s = 1.0);

// Sector index of the azimuth rsu -> target, azimuth in [0, 2*pi). Throws
// Error for coincident points or fewer than two sectors.
int beam_sector(const Position& rsu, const Position& target, int n_sectors);

struct AssistInputs {
  bool assist_enabled = true;
  double staleness_s = 1.0;
  Position rsu;
  Position true_position;  // simulator ground truth at time t
};

// Beamforming overhead of the next mmWave transmission: the assisted fraction
// when a fresh track predicts the sector the vehicle is really in, otherwise
// the full training fraction.
double assist_overhead(const FogOrchestratorState& fo, std::uint32_t vehicle, double t,
                       const AssistInputs& in, const MmwaveChannelConfig& config);

// Moves the vehicle's membership and its track entry from old_fo to new_fo.
void handover(std::uint32_t vehicle, FogOrchestratorState& old_fo, FogOrchestratorState& new_fo);

void buffer_record(FogOrchestratorState& fo, CloudRecordKind kind, LayerId layer);

// Flushes the cloud buffer into one aggregate batch stamped with the arrival
// time t + cloud latency.
CloudBatch cloud_sync(FogOrchestratorState& fo, double t);

std::string cloud_batch_json(const CloudBatch& batch);

}  // namespace cits
