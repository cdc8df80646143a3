#include "cits/control_plane.hpp"

#include <algorithm>
#include <numeric>

#include "cits/error.hpp"

namespace cits {

int PolicyConfig::rank(LayerId layer) const {
  for (std::size_t i = 0; i < priority.size(); ++i) {
    if (priority[i] == layer) return static_cast<int>(i);
  }
  return static_cast<int>(priority.size());
}

void validate(const PolicyConfig& p) {
  std::array<bool, kLayerCount> seen{};
  for (const auto layer : p.priority) {
    if (seen[index_of(layer)]) throw ConfigError("policy.priority", "must list each layer exactly once");
    seen[index_of(layer)] = true;
  }
  for (std::size_t i = 0; i < kRatCount; ++i) {
    if (p.load_caps_bps[i] && *p.load_caps_bps[i] < 0.0) {
      throw ConfigError("policy.load_caps_bps." + std::string(to_string(kAllRats[i])), "must be >= 0");
    }
  }
  if (p.max_deferrals < 1) throw ConfigError("policy.max_deferrals", "must be >= 1");
}

double FogLoadState::residual(RatId rat) const {
  return std::max(0.0, caps_bps[index_of(rat)] - committed_bps[index_of(rat)]);
}

void FogLoadState::commit(RatId rat, double bps) {
  if (bps > residual(rat)) throw Error("admission would over-commit " + std::string(to_string(rat)));
  committed_bps[index_of(rat)] += bps;
}

void FogLoadState::release(RatId rat, double bps) {
  auto& c = committed_bps[index_of(rat)];
  c = std::max(0.0, c - bps);
}

std::array<double, kRatCount> default_load_caps(const std::array<RatProfile, kRatCount>& profiles,
                                                const std::array<std::size_t, kRatCount>& rsus_per_rat,
                                                const PolicyConfig& policy) {
  std::array<double, kRatCount> caps{};
  for (std::size_t i = 0; i < kRatCount; ++i) {
    const RatId rat = kAllRats[i];
    if (policy.load_caps_bps[i]) {
      caps[i] = *policy.load_caps_bps[i];
      continue;
    }
    const bool shared_channel = rat == RatId::dsrc || rat == RatId::dsrc_px;
    const double cells = shared_channel ? 1.0 : static_cast<double>(rsus_per_rat[i]);
    caps[i] = profiles[i].net_cap_bps * cells;
  }
  return caps;
}

AdmissionDecision service_engine_admit(const StreamDescriptor& d, const FogLoadState& load,
                                       const PolicyConfig& policy) {
  const RatId primary = policy.primary_rat(d.layer);
  switch (d.layer) {
    case LayerId::base:
      return {Verdict::admit, primary, false};
    case LayerId::enh1:
      if (load.residual(primary) >= d.rate_bps) return {Verdict::admit, primary, true};
      if (policy.px_enabled && primary != RatId::dsrc_px && load.residual(RatId::dsrc_px) >= d.rate_bps) {
        return {Verdict::admit, RatId::dsrc_px, true};
      }
      return {Verdict::defer, std::nullopt, false};
    case LayerId::enh2:
      if (load.residual(primary) >= d.rate_bps) return {Verdict::admit, primary, true};
      return {Verdict::reject, std::nullopt, false};
  }
  return {Verdict::reject, std::nullopt, false};
}

std::vector<AdmissionDecision> admit_batch(const std::vector<AdmissionRequest>& requests,
                                           FogLoadState& load, const PolicyConfig& policy) {
  std::vector<std::size_t> order(requests.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = requests[a];
    const auto& rb = requests[b];
    const int pa = policy.rank(ra.descriptor->layer);
    const int pb = policy.rank(rb.descriptor->layer);
    if (pa != pb) return pa < pb;
    if (ra.vehicle != rb.vehicle) return ra.vehicle < rb.vehicle;
    return ra.descriptor->id < rb.descriptor->id;
  });

  std::vector<AdmissionDecision> out(requests.size());
  for (const std::size_t i : order) {
    const auto& d = *requests[i].descriptor;
    auto decision = service_engine_admit(d, load, policy);
    if (decision.verdict == Verdict::admit && decision.reserves) load.commit(*decision.rat, d.rate_bps);
    out[i] = decision;
  }
  return out;
}

RatSelection access_controller_select(const Message& message, LayerId layer, RatId admitted_rat,
                                      const RatAvailability& avail, const FogLoadState& load,
                                      double stream_rate_bps, const PolicyConfig& policy) {
  (void)message;
  RatSelection s;
  switch (layer) {
    case LayerId::base:
      if (avail[admitted_rat]) {
        s.kind = SelectionKind::rat;
        s.rat = admitted_rat;
        s.mode = admitted_rat == RatId::cv2x ? LinkMode::v2v : LinkMode::broadcast;
        return s;
      }
      if (admitted_rat != RatId::cv2x && avail[RatId::cv2x]) {
        // Sidelink over PC5.
        s.kind = SelectionKind::rat;
        s.rat = RatId::cv2x;
        s.mode = LinkMode::v2v;
        return s;
      }
      s.kind = SelectionKind::drop;
      return s;
    case LayerId::enh1:
      if (avail[admitted_rat]) {
        s.kind = SelectionKind::rat;
        s.rat = admitted_rat;
        s.mode = LinkMode::v2i;
        return s;
      }
      if (policy.px_enabled && admitted_rat != RatId::dsrc_px && avail[RatId::dsrc_px] &&
          stream_rate_bps <= load.residual(RatId::dsrc_px)) {
        s.kind = SelectionKind::rat;
        s.rat = RatId::dsrc_px;
        s.mode = LinkMode::v2i;
        s.moved_to_px = true;
        return s;
      }
      s.kind = SelectionKind::defer;
      return s;
    case LayerId::enh2:
      if (avail[admitted_rat]) {
        s.kind = SelectionKind::rat;
        s.rat = admitted_rat;
        s.mode = LinkMode::v2i;
        return s;
      }
      s.kind = SelectionKind::drop;
      return s;
  }
  return s;
}

bool is_local_rat(RatId rat) { return rat != RatId::cv2x; }

std::optional<Message> escalate_geo(const Message& message, const PolicyConfig& policy,
                                    std::uint64_t duplicate_id) {
  if (!policy.escalation_enabled) return std::nullopt;
  if (message.geo != GeoRelevance::city) return std::nullopt;
  if (!message.rat || !is_local_rat(*message.rat)) return std::nullopt;
  Message dup = message;
  dup.id = duplicate_id;
  dup.dst = kBroadcast;
  dup.rat = RatId::cv2x;
  dup.status = MessageStatus::created;
  return dup;
}

}  // namespace cits
