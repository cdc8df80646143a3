#include "cits/data_plane.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cits/error.hpp"

namespace cits {

namespace {

constexpr double kKbps = 1e3;
constexpr double kMbps = 1e6;

struct BuiltinType {
  std::string_view msg_type;
  LayerId layer;
};

constexpr std::array<BuiltinType, 15> kBuiltinLayers = {{
    {"bsm", LayerId::base},
    {"intersection_collision_avoidance", LayerId::base},
    {"road_side_alert", LayerId::base},
    {"emergency_brake", LayerId::base},
    {"cav_positions", LayerId::enh1},
    {"map_grid", LayerId::enh1},
    {"routes", LayerId::enh1},
    {"parking", LayerId::enh1},
    {"disruption", LayerId::enh1},
    {"trajectory", LayerId::enh1},
    {"bounding_boxes", LayerId::enh1},
    {"lidar_raw", LayerId::enh2},
    {"camera_raw", LayerId::enh2},
    {"radar_raw", LayerId::enh2},
    {"traffic_light_status", LayerId::base},
}};

CatalogEntry entry(std::string type, ServiceId service, LayerId layer, double lo, double hi,
                   GeoRelevance geo, bool enabled = true) {
  CatalogEntry e;
  e.msg_type = std::move(type);
  e.service = service;
  e.layer = layer;
  e.rate_bps = {lo, hi};
  e.geo = geo;
  e.reliable = layer != LayerId::enh2;
  e.enabled = enabled;
  return e;
}

}  // namespace

std::uint32_t PayloadDefaults::for_layer(LayerId layer) const {
  switch (layer) {
    case LayerId::base: return base;
    case LayerId::enh1: return enh1;
    case LayerId::enh2: return enh2;
  }
  return enh1;
}

MessageCatalog::MessageCatalog() {
  using enum ServiceId;
  using G = GeoRelevance;
  using L = LayerId;
  entries_ = {
      entry("map_grid", traffic_planning, L::enh1, 10 * kKbps, 10 * kMbps, G::city),
      entry("cav_positions", traffic_planning, L::enh1, 10 * kKbps, 800 * kKbps, G::city),
      entry("routes", traffic_planning, L::enh1, 80 * kKbps, 800 * kKbps, G::city),
      entry("lidar_raw", emergency_routing, L::enh2, 50 * kMbps, 250 * kMbps, G::fog_area),
      entry("bounding_boxes", emergency_routing, L::enh1, 80 * kKbps, 800 * kKbps, G::fog_area),
      entry("trajectory", emergency_routing, L::enh1, 80 * kKbps, 800 * kKbps, G::fog_area),
      // Raw camera and radar sources are opt-in.
      entry("camera_raw", emergency_routing, L::enh2, 400 * kMbps, 400 * kMbps, G::fog_area, false),
      entry("radar_raw", emergency_routing, L::enh2, 2800 * kMbps, 2800 * kMbps, G::fog_area, false),
      entry("parking", multimodal_commuting, L::enh1, 10 * kKbps, 10 * kMbps, G::city),
      entry("cav_positions", multimodal_commuting, L::enh1, 10 * kKbps, 800 * kKbps, G::city),
      entry("disruption", multimodal_commuting, L::enh1, 30 * kKbps, 100 * kKbps, G::city),
  };
}

void MessageCatalog::upsert(CatalogEntry e) {
  for (auto& existing : entries_) {
    if (existing.service == e.service && existing.msg_type == e.msg_type) {
      existing = std::move(e);
      return;
    }
  }
  entries_.push_back(std::move(e));
}

const CatalogEntry* MessageCatalog::find(ServiceId service, const std::string& msg_type) const {
  for (const auto& e : entries_) {
    if (e.service == service && e.msg_type == msg_type) return &e;
  }
  return nullptr;
}

const CatalogEntry* MessageCatalog::find_any(const std::string& msg_type) const {
  for (const auto& e : entries_) {
    if (e.msg_type == msg_type) return &e;
  }
  return nullptr;
}

LayerId classify_layer(const std::string& msg_type, const MessageCatalog& catalog) {
  for (const auto& b : kBuiltinLayers) {
    if (b.msg_type == msg_type) return b.layer;
  }
  if (const auto* e = catalog.find_any(msg_type)) return e->layer;
  throw Error("unknown message type '" + msg_type + "'");
}

LayerId classify_layer(const StreamDescriptor& d, const MessageCatalog& catalog) {
  return classify_layer(d.msg_type, catalog);
}

double sample_stream_rate(const Interval& interval, RngStream& rng) {
  if (!interval.valid()) throw Error("sample_stream_rate: inverted interval");
  return rng.uniform(interval.lo, interval.hi);
}

void check_bsm_period(double period_s) {
  if (!(period_s >= kMinBsmPeriodS)) {
    throw Error("BSM period " + std::to_string(period_s) + " s is below the 0.1 s floor");
  }
}

void validate(const StreamDescriptor& d, const MessageCatalog& catalog) {
  const LayerId layer = classify_layer(d, catalog);
  if (layer != d.layer) throw Error("stream " + d.msg_type + " carries the wrong layer");
  if (d.layer == LayerId::enh2 && d.reliable) {
    throw Error("stream " + d.msg_type + ": enhancement-2 streams cannot be reliable");
  }
  if (d.layer == LayerId::base) {
    if (d.geo != GeoRelevance::local) throw Error("stream " + d.msg_type + ": base layer must be local");
    check_bsm_period(d.period_s);
  }
  if (d.payload_bytes == 0) throw Error("stream " + d.msg_type + ": payload must be > 0");
  if (!(d.rate_bps > 0.0) || !(d.period_s > 0.0)) {
    throw Error("stream " + d.msg_type + ": rate and period must be > 0");
  }
  if (const auto* e = catalog.find(d.service, d.msg_type); e && !e->period_s) {
    // Relative slack absorbs the rounding of rate draws near the bounds.
    const double slack = 1e-9 * e->rate_bps.hi;
    if (d.rate_bps < e->rate_bps.lo - slack || d.rate_bps > e->rate_bps.hi + slack) {
      throw Error("stream " + d.msg_type + ": rate outside its catalog interval");
    }
  }
}

std::vector<StreamDescriptor> service_streams(ServiceId service, const MessageCatalog& catalog,
                                              RngStream& rng, std::uint32_t next_id) {
  std::vector<StreamDescriptor> out;
  for (const auto& e : catalog.entries()) {
    if (e.service != service || !e.enabled) continue;
    StreamDescriptor d;
    d.id = next_id++;
    d.service = service;
    d.msg_type = e.msg_type;
    d.layer = classify_layer(e.msg_type, catalog);
    d.geo = e.geo;
    d.reliable = e.reliable && d.layer != LayerId::enh2;
    d.payload_bytes = e.payload_bytes.value_or(catalog.payloads.for_layer(d.layer));
    if (e.period_s) {
      d.period_s = *e.period_s;
      d.rate_bps = d.payload_bytes * 8.0 / d.period_s;
    } else {
      d.rate_bps = sample_stream_rate(e.rate_bps, rng);
      d.period_s = d.payload_bytes * 8.0 / d.rate_bps;
    }
    out.push_back(std::move(d));
  }
  return out;
}

StreamDescriptor bsm_descriptor(std::uint32_t id, double period_s, std::uint32_t payload_bytes) {
  check_bsm_period(period_s);
  StreamDescriptor d;
  d.id = id;
  d.service = ServiceId::safety_core;
  d.msg_type = "bsm";
  d.layer = LayerId::base;
  d.geo = GeoRelevance::local;
  d.reliable = true;
  d.period_s = period_s;
  d.payload_bytes = payload_bytes;
  d.rate_bps = payload_bytes * 8.0 / period_s;
  return d;
}

Bsm bsm_tick(const StreamDescriptor& stream, NodeId src, const KinematicState& state, double t,
             std::uint64_t msg_id) {
  Bsm b;
  b.message.id = msg_id;
  b.message.stream_id = stream.id;
  b.message.src = src;
  b.message.dst = kBroadcast;
  b.message.bytes = stream.payload_bytes;
  b.message.created_at = t;
  b.message.layer = LayerId::base;
  b.message.service = ServiceId::safety_core;
  b.message.geo = GeoRelevance::local;
  b.snapshot = state;
  return b;
}

}  // namespace cits
