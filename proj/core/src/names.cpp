#include <array>

#include "cits/message.hpp"
#include "cits/rat_id.hpp"

namespace cits {

namespace {

constexpr std::array<std::string_view, kRatCount> kRatNames = {"dsrc", "dsrc_px", "cv2x", "mmwave"};
constexpr std::array<std::string_view, kLayerCount> kLayerNames = {"base", "enh1", "enh2"};
constexpr std::array<std::string_view, kServiceCount> kServiceNames = {
    "traffic_planning", "emergency_routing", "multimodal_commuting", "safety_core"};
constexpr std::array<std::string_view, 3> kGeoNames = {"local", "fog_area", "city"};
constexpr std::array<std::string_view, 6> kStatusNames = {
    "created", "delivered", "erased", "dropped_no_coverage", "dropped_policy", "deferred"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RatId rat) { return kRatNames[index_of(rat)]; }
std::optional<RatId> parse_rat(std::string_view name) { return lookup<RatId>(kRatNames, name); }

std::string_view to_string(LayerId layer) { return kLayerNames[index_of(layer)]; }
std::string_view to_string(ServiceId s) { return kServiceNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(GeoRelevance g) { return kGeoNames[static_cast<std::size_t>(g)]; }
std::string_view to_string(MessageStatus s) { return kStatusNames[static_cast<std::size_t>(s)]; }

std::optional<LayerId> parse_layer(std::string_view name) { return lookup<LayerId>(kLayerNames, name); }
std::optional<ServiceId> parse_service(std::string_view name) {
  return lookup<ServiceId>(kServiceNames, name);
}
std::optional<GeoRelevance> parse_geo(std::string_view name) {
  return lookup<GeoRelevance>(kGeoNames, name);
}
std::optional<MessageStatus> parse_status(std::string_view name) {
  return lookup<MessageStatus>(kStatusNames, name);
}

bool valid_transition(MessageStatus from, MessageStatus to) {
  if (to == MessageStatus::created) return false;
  return from == MessageStatus::created || from == MessageStatus::deferred;
}

}  // namespace cits
