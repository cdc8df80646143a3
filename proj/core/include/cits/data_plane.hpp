#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cits/message.hpp"
#include "cits/rat.hpp"
#include "cits/rng.hpp"
#include "cits/trace.hpp"

namespace cits {

inline constexpr double kMinBsmPeriodS = 0.1;

struct PayloadDefaults {
  std::uint32_t base = 300;
  std::uint32_t enh1 = 1500;
  std::uint32_t enh2 = 64 * 1024;

  std::uint32_t for_layer(LayerId layer) const;
};

// One message type a service can emit. Base-layer entries are periodic
// (period_s); the others are rate driven with period = payload*8/rate.
struct CatalogEntry {
  std::string msg_type;
  ServiceId service = ServiceId::safety_core;
  LayerId layer = LayerId::enh1;
  Interval rate_bps;
  GeoRelevance geo = GeoRelevance::local;
  bool reliable = true;
  std::optional<std::uint32_t> payload_bytes;
  std::optional<double> period_s;
  bool enabled = true;
};

struct StreamDescriptor {
  std::uint32_t id = 0;
  ServiceId service = ServiceId::safety_core;
  std::string msg_type;
  LayerId layer = LayerId::base;
  double rate_bps = 0.0;
  GeoRelevance geo = GeoRelevance::local;
  bool reliable = true;
  double period_s = 0.0;
  std::uint32_t payload_bytes = 0;
};

// Known message types, their layers, rate intervals and relevance. Entries
// may be added or overridden by the scenario.
class MessageCatalog {
 public:
  MessageCatalog();  // the built-in catalog

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  // Adds a new (service, msg_type) entry or replaces an existing one.
  void upsert(CatalogEntry entry);
  const CatalogEntry* find(ServiceId service, const std::string& msg_type) const;
  const CatalogEntry* find_any(const std::string& msg_type) const;

  PayloadDefaults payloads;

 private:
  std::vector<CatalogEntry> entries_;
};

// Layer of a message type: SAE J2735 safety types are Base, processed
// feature streams Enh1, raw sensor streams Enh2. Types outside the built-in
// classification use the layer their catalog entry declares. Throws Error
// for unknown types.
LayerId classify_layer(const StreamDescriptor& descriptor, const MessageCatalog& catalog);
LayerId classify_layer(const std::string& msg_type, const MessageCatalog& catalog);

// Uniform draw in [lo, hi]; throws Error for an inverted interval.
double sample_stream_rate(const Interval& interval, RngStream& rng);

// Throws Error when the descriptor breaks a layer invariant.
void validate(const StreamDescriptor& descriptor, const MessageCatalog& catalog);

// Instantiates the enabled catalog entries of a service. Rates are drawn once
// and stay fixed for the run. Stream ids continue from next_id. The BSM
// stream is not part of any service list; see bsm_descriptor.
std::vector<StreamDescriptor> service_streams(ServiceId service, const MessageCatalog& catalog,
                                              RngStream& rng, std::uint32_t next_id = 0);

// Throws Error for a period below the 0.1 s BSM floor.
void check_bsm_period(double period_s);

StreamDescriptor bsm_descriptor(std::uint32_t id, double period_s, std::uint32_t payload_bytes);

struct Bsm {
  Message message;
  KinematicState snapshot;
};

// Broadcast BSM carrying the vehicle's kinematic snapshot at time t.
Bsm bsm_tick(const StreamDescriptor& stream, NodeId src, const KinematicState& state, double t,
             std::uint64_t msg_id);

}  // namespace cits
