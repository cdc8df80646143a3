#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cits/kpi.hpp"
#include "cits/message.hpp"
#include "cits/rat_id.hpp"
#include "cits/rng.hpp"
#include "cits/topology.hpp"

namespace cits {

// Closed interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool valid() const { return lo <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Coverage : unsigned char { ubiquitous, intermittent };
enum class V2vMode : unsigned char { direct, pc5, none };

// V2I unicast, V2V (direct or sidelink) and one-to-many broadcast.
enum class LinkMode : unsigned char { v2i, v2v, broadcast };

struct RatProfile {
  RatId name = RatId::dsrc;
  std::vector<Interval> freq_bands_ghz;
  double channel_bw_mhz = 0.0;
  double range_m = 0.0;
  Interval phy_rate_bps;  // hi is the maximum PHY rate
  double net_cap_bps = 0.0;
  Interval e2e_v2i_ms;
  Interval e2e_v2v_ms;
  Interval establishment_ms;
  Coverage coverage = Coverage::intermittent;
  std::optional<double> mobility_limit_kmh;  // empty means no limit
  bool broadcast = true;
  V2vMode v2v_mode = V2vMode::direct;

  double max_phy_rate_bps() const { return phy_rate_bps.hi; }
};

// Throws ConfigError when an interval is inverted or the usable throughput
// exceeds the PHY rate.
void validate(const RatProfile& profile);

// Table defaults for the four candidate RATs.
RatProfile profile_of(RatId name);
RatProfile profile_of(std::string_view name);

// Density-driven DSRC erasure and distance-driven PDR curves.
struct DsrcModel {
  double p0 = 0.01;        // erasure probability at the reference density
  double n0 = 10.0;        // reference density, vehicles in contention range
  double gamma = 1.5;      // super-linear exponent
  double p_max = 0.9;
  double pdr_scale_m = 350.0;
  double px_gain = 1.4;    // 802.11px PDR improvement factor
};

struct MmwaveChannelConfig {
  double pl0_db = 68.0;  // free space at 1 m, 60 GHz
  double n_los = 2.4;
  double n_nlos = 4.0;
  double blockage_slope_per_m = 0.01;
  double blockage_max = 0.5;
  double bi_length_ms = 100.0;
  double overhead_no_assist = 1.0 / 3.0;
  double overhead_with_assist = 0.05;
  int n_sectors = 16;

  // min(blockage_max, slope * d)
  double p_blockage(double d) const;
};

void validate(const MmwaveChannelConfig& config);

struct LinkState {
  std::uint32_t vehicle = 0;
  std::uint32_t endpoint = 0;
  RatId rat = RatId::dsrc;
  bool established = false;
  // Completion time of the current (or last) establishment; only meaningful
  // once an establishment has started.
  double establish_done_at = 0.0;
  bool establishing = false;
};

// Geometric part of availability: range and mobility limit.
bool in_coverage(const RatProfile& profile, const Position& tx, const Position& rx, double speed_kmh);

// in_coverage plus, for intermittent RATs with a blockage model, a blockage
// draw. Only mmWave draws; DSRC intermittency is captured by its range.
bool link_available(const RatProfile& profile, const Position& tx, const Position& rx,
                    double speed_kmh, RngStream& rng,
                    const MmwaveChannelConfig& mmwave = MmwaveChannelConfig{});

// Zero for an established link, otherwise a uniform draw in the profile's
// establishment interval (beam training for mmWave).
double establishment_delay(const RatProfile& profile, const LinkState& link, RngStream& rng);

// Interval the end-to-end latency of a mode is drawn from. Throws Error for
// modes the RAT does not support (mmWave broadcast, V2V without a V2V mode).
Interval latency_interval(const RatProfile& profile, LinkMode mode);
double latency_sample(const RatProfile& profile, LinkMode mode, RngStream& rng);

double dsrc_erasure_prob(double density, const DsrcModel& model = DsrcModel{});

// Delivery probability against distance before contention losses.
double pdr_at_distance(const RatProfile& profile, double d, const DsrcModel& model = DsrcModel{});

// Log-distance path loss in dB; throws for d < 1 m.
double mmwave_path_loss(const MmwaveChannelConfig& config, double d, bool los);

double mmwave_effective_rate(const MmwaveChannelConfig& config, double peak_bps, bool assist);

// Shared medium behind one RSU radio: a FIFO serializer plus, for the DSRC
// family, a per-second delivered-bits budget so delivered throughput never
// exceeds the usable capacity in any aligned one-second window.
struct Channel {
  double busy_until_s = 0.0;
  double max_queue_s = 0.1;
  std::optional<double> window_cap_bits;
  std::map<std::int64_t, double> window_bits;

  double airtime_s = 0.0;
  double training_s = 0.0;  // share of airtime spent on beam training
  double bits_on_air = 0.0;
  double bits_delivered = 0.0;
  double max_instant_rate_bps = 0.0;
};

struct TxContext {
  LinkMode mode = LinkMode::v2i;
  Position tx;
  Position rx;
  double speed_kmh = 0.0;
  double density = 0.0;      // DSRC contention density
  double bi_overhead = 0.0;  // mmWave beamforming fraction of the BI
  double now_s = 0.0;
};

struct TxOutcome {
  MessageStatus status = MessageStatus::created;
  double t_rx_s = 0.0;
  double establish_s = 0.0;
  double queue_s = 0.0;
  double serialization_s = 0.0;
  double latency_s = 0.0;
  bool link_started = false;  // an establishment began; caller schedules its completion
  KpiRecord record;
};

struct RatModels {
  DsrcModel dsrc;
  MmwaveChannelConfig mmwave;
};

// availability -> establishment -> erasure draw -> serialization -> latency.
// Always produces exactly one KpiRecord, failures are statuses.
TxOutcome transmit(const Message& message, const RatProfile& profile, const RatModels& models,
                   const TxContext& ctx, LinkState& link, Channel& channel, RngStream& rng);

}  // namespace cits
