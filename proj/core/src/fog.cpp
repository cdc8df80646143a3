#include "cits/fog.hpp"

#include <cmath>
#include <numbers>

#include "cits/error.hpp"
#include "json.hpp"

namespace cits {

void register_bsm(FogOrchestratorState& fo, std::uint32_t vehicle, const KinematicState& s,
                  double delivered_at) {
  auto& e = fo.tracks[vehicle];
  e.vehicle = vehicle;
  e.last_bsm_time = delivered_at;
  e.position = s.position;
  e.speed = s.speed;
  e.heading = s.heading;
}

bool is_fresh(const TrackEntry& entry, double t, double staleness_s) {
  return t >= entry.last_bsm_time && t - entry.last_bsm_time <= staleness_s;
}

Position predict_position(const TrackEntry& entry, double t_query, double staleness_s) {
  if (t_query < entry.last_bsm_time) throw Error("predict_position: query precedes the last BSM");
  const double age = t_query - entry.last_bsm_time;
  if (age > staleness_s) throw Error("predict_position: track entry is stale");
  return {entry.position.x + entry.speed * age * std::cos(entry.heading),
          entry.position.y + entry.speed * age * std::sin(entry.heading)};
}

int beam_sector(const Position& rsu, const Position& target, int n_sectors) {
  if (n_sectors < 2) throw Error("beam_sector: need at least two sectors");
  if (rsu == target) throw Error("beam_sector: coincident points have no azimuth");
  const double az = normalize_heading(std::atan2(target.y - rsu.y, target.x - rsu.x));
  const double width = 2.0 * std::numbers::pi / n_sectors;
  const int idx = static_cast<int>(std::floor(az / width));
  return std::min(idx, n_sectors - 1);
}

double assist_overhead(const FogOrchestratorState& fo, std::uint32_t vehicle, double t,
                       const AssistInputs& in, const MmwaveChannelConfig& config) {
  const double full = config.overhead_no_assist;
  if (!in.assist_enabled) return full;
  const auto it = fo.tracks.find(vehicle);
  if (it == fo.tracks.end() || !is_fresh(it->second, t, in.staleness_s)) return full;
  const Position predicted = predict_position(it->second, t, in.staleness_s);
  if (predicted == in.rsu || in.true_position == in.rsu) return full;
  const int guess = beam_sector(in.rsu, predicted, config.n_sectors);
  const int truth = beam_sector(in.rsu, in.true_position, config.n_sectors);
  return guess == truth ? config.overhead_with_assist : full;
}

void handover(std::uint32_t vehicle, FogOrchestratorState& old_fo, FogOrchestratorState& new_fo) {
  old_fo.registered.erase(vehicle);
  new_fo.registered.insert(vehicle);
  if (auto node = old_fo.tracks.extract(vehicle)) {
    new_fo.tracks.insert_or_assign(vehicle, node.mapped());
  }
}

void buffer_record(FogOrchestratorState& fo, CloudRecordKind kind, LayerId layer) {
  fo.cloud_buffer.push_back({kind, layer});
}

CloudBatch cloud_sync(FogOrchestratorState& fo, double t) {
  CloudBatch b;
  b.t_s = t + fo.cloud_latency_ms / 1000.0;
  b.area = fo.area_id;
  b.vehicles = fo.registered.size();
  b.records = fo.cloud_buffer.size();
  for (const auto& r : fo.cloud_buffer) {
    switch (r.kind) {
      case CloudRecordKind::admitted: ++b.admitted[index_of(r.layer)]; break;
      case CloudRecordKind::dropped: ++b.dropped[index_of(r.layer)]; break;
      case CloudRecordKind::escalated: ++b.escalated; break;
    }
  }
  fo.cloud_buffer.clear();
  return b;
}

std::string cloud_batch_json(const CloudBatch& b) {
  nlohmann::ordered_json j;
  j["t_s"] = b.t_s;
  j["area"] = b.area;
  j["vehicles"] = b.vehicles;
  nlohmann::ordered_json admitted;
  nlohmann::ordered_json dropped;
  for (std::size_t i = 0; i < kLayerCount; ++i) {
    const std::string layer(to_string(static_cast<LayerId>(i)));
    admitted[layer] = b.admitted[i];
    dropped[layer] = b.dropped[i];
  }
  j["admitted"] = admitted;
  j["dropped"] = dropped;
  j["escalated"] = b.escalated;
  return j.dump();
}

}  // namespace cits
