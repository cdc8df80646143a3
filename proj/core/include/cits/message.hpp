#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cits/rat_id.hpp"

namespace cits {

// Scalable data layers: one base layer and two enhancement layers.
enum class LayerId : unsigned char { base = 0, enh1 = 1, enh2 = 2 };
inline constexpr std::size_t kLayerCount = 3;

enum class ServiceId : unsigned char {
  traffic_planning = 0,
  emergency_routing = 1,
  multimodal_commuting = 2,
  safety_core = 3,
};
inline constexpr std::size_t kServiceCount = 4;

enum class GeoRelevance : unsigned char { local = 0, fog_area = 1, city = 2 };

enum class MessageStatus : unsigned char {
  created = 0,
  delivered,
  erased,
  dropped_no_coverage,
  dropped_policy,
  deferred,
};

std::string_view to_string(LayerId layer);
std::string_view to_string(ServiceId service);
std::string_view to_string(GeoRelevance geo);
std::string_view to_string(MessageStatus status);
std::optional<LayerId> parse_layer(std::string_view name);
std::optional<ServiceId> parse_service(std::string_view name);
std::optional<GeoRelevance> parse_geo(std::string_view name);
std::optional<MessageStatus> parse_status(std::string_view name);

constexpr std::size_t index_of(LayerId layer) { return static_cast<std::size_t>(layer); }

// Node ids index a NameTable (kpi.hpp). kBroadcast marks a broadcast
// destination.
using NodeId = std::uint32_t;
inline constexpr NodeId kBroadcast = 0;

struct Message {
  std::uint64_t id = 0;
  std::uint32_t stream_id = 0;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  std::uint32_t bytes = 0;
  double created_at = 0.0;
  LayerId layer = LayerId::base;
  ServiceId service = ServiceId::safety_core;
  GeoRelevance geo = GeoRelevance::local;
  std::optional<RatId> rat;
  MessageStatus status = MessageStatus::created;
};

// Legal transitions: created -> any terminal status, and deferred -> any
// status other than created (a deferred message may be retried).
bool valid_transition(MessageStatus from, MessageStatus to);

}  // namespace cits
