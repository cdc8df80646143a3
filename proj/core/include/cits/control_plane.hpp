#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cits/data_plane.hpp"
#include "cits/message.hpp"
#include "cits/rat.hpp"

namespace cits {

struct PolicyConfig {
  std::array<RatId, kLayerCount> layer_rat_map = {RatId::dsrc, RatId::cv2x, RatId::mmwave};
  // Highest priority first.
  std::array<LayerId, kLayerCount> priority = {LayerId::base, LayerId::enh1, LayerId::enh2};
  bool px_enabled = false;
  bool escalation_enabled = true;
  // Per-RAT admission caps for one Fog Area. Unset entries fall back to the
  // topology-derived default (see default_load_caps).
  std::array<std::optional<double>, kRatCount> load_caps_bps{};
  int max_deferrals = 10;

  RatId primary_rat(LayerId layer) const { return layer_rat_map[index_of(layer)]; }
  int rank(LayerId layer) const;
};

// Throws ConfigError when a layer lacks a RAT, the priority is not a
// permutation or a cap is negative.
void validate(const PolicyConfig& policy);

// Committed stream rates of one Fog Area against its caps.
struct FogLoadState {
  std::array<double, kRatCount> committed_bps{};
  std::array<double, kRatCount> caps_bps{};

  double residual(RatId rat) const;
  // Throws Error if the commit would exceed the cap.
  void commit(RatId rat, double bps);
  void release(RatId rat, double bps);
};

// Shared-channel RATs (DSRC family) cap at one channel's usable throughput;
// cell-based RATs at the per-cell capacity times the cells in the area.
std::array<double, kRatCount> default_load_caps(const std::array<RatProfile, kRatCount>& profiles,
                                                const std::array<std::size_t, kRatCount>& rsus_per_rat,
                                                const PolicyConfig& policy);

enum class Verdict : unsigned char { admit, defer, reject };

struct AdmissionDecision {
  Verdict verdict = Verdict::admit;
  std::optional<RatId> rat;  // set on admit
  bool reserves = false;     // base streams are admitted without reservation
};

// Service Engine. Base is always admitted. Enhancement streams are admitted
// when their target RAT's residual covers the stream rate; otherwise Enh1 is
// deferred (or placed on 802.11px when enabled and it fits) and Enh2 rejected.
AdmissionDecision service_engine_admit(const StreamDescriptor& descriptor, const FogLoadState& load,
                                       const PolicyConfig& policy);

struct AdmissionRequest {
  std::uint32_t vehicle = 0;
  const StreamDescriptor* descriptor = nullptr;
};

// Admits a set of contending streams in strict priority order (then vehicle
// index, then stream id), committing capacity as it goes. Decisions come back
// in request order.
std::vector<AdmissionDecision> admit_batch(const std::vector<AdmissionRequest>& requests,
                                           FogLoadState& load, const PolicyConfig& policy);

struct RatAvailability {
  std::array<bool, kRatCount> available{};

  bool operator[](RatId rat) const { return available[index_of(rat)]; }
  void set(RatId rat, bool value) { available[index_of(rat)] = value; }
};

enum class SelectionKind : unsigned char { rat, drop, defer };

struct RatSelection {
  SelectionKind kind = SelectionKind::drop;
  RatId rat = RatId::dsrc;
  LinkMode mode = LinkMode::v2i;
  // Enh1 moved from its admitted RAT to 802.11px; the caller moves the
  // reservation.
  bool moved_to_px = false;
};

// Access Controller. admitted_rat is the RAT the Service Engine reserved (or
// the layer's primary RAT for Base).
RatSelection access_controller_select(const Message& message, LayerId layer, RatId admitted_rat,
                                      const RatAvailability& availability, const FogLoadState& load,
                                      double stream_rate_bps, const PolicyConfig& policy);

bool is_local_rat(RatId rat);

// City-relevant messages carried on a local RAT get a duplicate for C-V2X
// broadcast toward every Fog Area. The duplicate has a fresh id.
std::optional<Message> escalate_geo(const Message& message, const PolicyConfig& policy,
                                    std::uint64_t duplicate_id);

}  // namespace cits
