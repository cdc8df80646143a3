#include "cits/rat.hpp"

#include <algorithm>
#include <cmath>

#include "cits/error.hpp"

namespace cits {

namespace {
constexpr double kMbps = 1e6;
constexpr double kGbps = 1e9;
}  // namespace

RatProfile profile_of(RatId name) {
  RatProfile p;
  p.name = name;
  switch (name) {
    case RatId::dsrc:
      p.freq_bands_ghz = {{5.85, 5.925}};
      p.channel_bw_mhz = 10.0;
      p.range_m = 1000.0;
      p.phy_rate_bps = {3 * kMbps, 27 * kMbps};
      p.net_cap_bps = 15 * kMbps;
      p.e2e_v2i_ms = {1.0, 10.0};
      p.e2e_v2v_ms = {1.0, 10.0};
      p.establishment_ms = {0.0, 0.0};
      p.coverage = Coverage::intermittent;
      p.mobility_limit_kmh = 130.0;
      p.broadcast = true;
      p.v2v_mode = V2vMode::direct;
      break;
    case RatId::dsrc_px:
      p = profile_of(RatId::dsrc);
      p.name = RatId::dsrc_px;
      p.phy_rate_bps = {3 * kMbps, 60 * kMbps};
      // Same protocol efficiency as legacy DSRC (15 of 27 Mbps).
      p.net_cap_bps = 60 * kMbps * (15.0 / 27.0);
      break;
    case RatId::cv2x:
      p.freq_bands_ghz = {{0.45, 4.99}, {5.725, 5.765}};
      p.channel_bw_mhz = 640.0;
      p.range_m = 30000.0;
      p.phy_rate_bps = {0.0, 3 * kGbps};
      p.net_cap_bps = 100 * kMbps;  // shared per cell
      p.e2e_v2i_ms = {30.0, 50.0};
      p.e2e_v2v_ms = {20.0, 80.0};
      p.establishment_ms = {40.0, 110.0};
      p.coverage = Coverage::ubiquitous;
      p.mobility_limit_kmh = 350.0;
      p.broadcast = true;
      p.v2v_mode = V2vMode::pc5;
      break;
    case RatId::mmwave:
      p.freq_bands_ghz = {{57.05, 64.0}};
      p.channel_bw_mhz = 2160.0;
      p.range_m = 50.0;
      p.phy_rate_bps = {0.0, 7 * kGbps};
      p.net_cap_bps = 7 * kGbps;
      p.e2e_v2i_ms = {1.0, 10.0};
      p.e2e_v2v_ms = {1.0, 10.0};
      p.establishment_ms = {10.0, 20.0};
      p.coverage = Coverage::intermittent;
      p.mobility_limit_kmh = 100.0;
      p.broadcast = false;
      p.v2v_mode = V2vMode::direct;
      break;
  }
  return p;
}

RatProfile profile_of(std::string_view name) {
  const auto id = parse_rat(name);
  if (!id) throw Error("unknown RAT '" + std::string(name) + "'");
  return profile_of(*id);
}

void validate(const RatProfile& p) {
  const std::string rat(to_string(p.name));
  for (const auto& band : p.freq_bands_ghz) {
    if (!band.valid()) throw ConfigError(rat + ".freq_bands_ghz", "inverted interval");
  }
  if (!p.phy_rate_bps.valid()) throw ConfigError(rat + ".phy_rate_bps", "inverted interval");
  if (!p.e2e_v2i_ms.valid()) throw ConfigError(rat + ".e2e_v2i_ms", "inverted interval");
  if (!p.e2e_v2v_ms.valid()) throw ConfigError(rat + ".e2e_v2v_ms", "inverted interval");
  if (!p.establishment_ms.valid()) throw ConfigError(rat + ".establishment_ms", "inverted interval");
  if (p.e2e_v2i_ms.lo < 0.0 || p.e2e_v2v_ms.lo < 0.0 || p.establishment_ms.lo < 0.0) {
    throw ConfigError(rat, "negative latency bound");
  }
  if (p.range_m < 0.0) throw ConfigError(rat + ".range_m", "must be >= 0");
  if (p.net_cap_bps <= 0.0) throw ConfigError(rat + ".net_cap_bps", "must be > 0");
  if (p.net_cap_bps > p.max_phy_rate_bps()) {
    throw ConfigError(rat + ".net_cap_bps", "exceeds the maximum PHY rate");
  }
  if (p.mobility_limit_kmh && *p.mobility_limit_kmh < 0.0) {
    throw ConfigError(rat + ".mobility_limit_kmh", "must be >= 0");
  }
}

double MmwaveChannelConfig::p_blockage(double d) const {
  return std::clamp(std::min(blockage_max, blockage_slope_per_m * d), 0.0, 1.0);
}

void validate(const MmwaveChannelConfig& c) {
  if (!(c.n_los < 2.8)) throw ConfigError("mmwave.n_los", "LOS exponent must be < 2.8");
  if (c.n_nlos < 3.8 || c.n_nlos > 5.6) {
    throw ConfigError("mmwave.n_nlos", "NLOS exponent must lie in [3.8, 5.6]");
  }
  if (c.overhead_with_assist < 0.0 || c.overhead_with_assist > c.overhead_no_assist) {
    throw ConfigError("mmwave.overhead_with_assist", "must lie in [0, overhead_no_assist]");
  }
  if (c.overhead_no_assist < 0.0 || c.overhead_no_assist >= 1.0) {
    throw ConfigError("mmwave.overhead_no_assist", "must lie in [0, 1)");
  }
  if (c.blockage_slope_per_m < 0.0) throw ConfigError("mmwave.blockage_slope_per_m", "must be >= 0");
  if (c.blockage_max < 0.0 || c.blockage_max > 1.0) {
    throw ConfigError("mmwave.blockage_max", "must lie in [0, 1]");
  }
  if (c.bi_length_ms <= 0.0) throw ConfigError("mmwave.bi_length_ms", "must be > 0");
  if (c.n_sectors < 2) throw ConfigError("mmwave.n_sectors", "must be >= 2");
}

bool in_coverage(const RatProfile& profile, const Position& tx, const Position& rx, double speed_kmh) {
  if (!in_range(tx, rx, profile)) return false;
  if (profile.mobility_limit_kmh && speed_kmh > *profile.mobility_limit_kmh) return false;
  return true;
}

bool link_available(const RatProfile& profile, const Position& tx, const Position& rx,
                    double speed_kmh, RngStream& rng, const MmwaveChannelConfig& mmwave) {
  if (!in_coverage(profile, tx, rx, speed_kmh)) return false;
  if (profile.coverage == Coverage::intermittent && profile.name == RatId::mmwave) {
    return !rng.bernoulli(mmwave.p_blockage(distance(tx, rx)));
  }
  return true;
}

double establishment_delay(const RatProfile& profile, const LinkState& link, RngStream& rng) {
  if (link.established) return 0.0;
  return rng.uniform(profile.establishment_ms.lo, profile.establishment_ms.hi);
}

Interval latency_interval(const RatProfile& profile, LinkMode mode) {
  switch (mode) {
    case LinkMode::v2i:
      return profile.e2e_v2i_ms;
    case LinkMode::v2v:
      if (profile.v2v_mode == V2vMode::none) {
        throw Error(std::string(to_string(profile.name)) + " has no V2V mode");
      }
      return profile.e2e_v2v_ms;
    case LinkMode::broadcast:
      if (!profile.broadcast) {
        throw Error(std::string(to_string(profile.name)) + " does not support broadcast");
      }
      // Cellular broadcast runs over the Uu downlink; sidelink broadcast is
      // requested as V2V.
      return profile.e2e_v2i_ms;
  }
  return profile.e2e_v2i_ms;
}

double latency_sample(const RatProfile& profile, LinkMode mode, RngStream& rng) {
  const Interval iv = latency_interval(profile, mode);
  return rng.uniform(iv.lo, iv.hi);
}

double dsrc_erasure_prob(double density, const DsrcModel& m) {
  if (density <= 0.0) return 0.0;
  return std::min(m.p_max, m.p0 * std::pow(density / m.n0, m.gamma));
}

double pdr_at_distance(const RatProfile& profile, double d, const DsrcModel& m) {
  if (d < 0.0) throw Error("pdr_at_distance: negative distance");
  const double ratio = d / m.pdr_scale_m;
  const double legacy = std::exp(-ratio * ratio);
  switch (profile.name) {
    case RatId::dsrc: return legacy;
    case RatId::dsrc_px: return std::min(1.0, m.px_gain * legacy);
    default: return 1.0;
  }
}

double mmwave_path_loss(const MmwaveChannelConfig& c, double d, bool los) {
  if (!(d >= 1.0)) throw Error("mmwave_path_loss: distance below the 1 m reference");
  return c.pl0_db + 10.0 * (los ? c.n_los : c.n_nlos) * std::log10(d);
}

double mmwave_effective_rate(const MmwaveChannelConfig& c, double peak_bps, bool assist) {
  if (!(peak_bps > 0.0)) throw Error("mmwave_effective_rate: peak rate must be > 0");
  return peak_bps * (1.0 - (assist ? c.overhead_with_assist : c.overhead_no_assist));
}

TxOutcome transmit(const Message& message, const RatProfile& profile, const RatModels& models,
                   const TxContext& ctx, LinkState& link, Channel& channel, RngStream& rng) {
  TxOutcome out;
  Message msg = message;
  msg.rat = profile.name;
  const auto finish = [&](MessageStatus status) {
    out.status = status;
    out.record = make_record(msg, status, out.t_rx_s);
    return out;
  };

  if (ctx.mode == LinkMode::broadcast && !profile.broadcast) return finish(MessageStatus::dropped_policy);
  if (ctx.mode == LinkMode::v2v && profile.v2v_mode == V2vMode::none) {
    return finish(MessageStatus::dropped_policy);
  }

  if (!in_coverage(profile, ctx.tx, ctx.rx, ctx.speed_kmh)) {
    link.established = false;
    link.establishing = false;
    return finish(MessageStatus::dropped_no_coverage);
  }

  // Establishment.
  if (!link.established) {
    if (link.establishing) {
      if (link.establish_done_at <= ctx.now_s) {
        link.established = true;
        link.establishing = false;
      } else {
        out.establish_s = link.establish_done_at - ctx.now_s;
      }
    } else {
      const double ms = establishment_delay(profile, link, rng);
      if (ms <= 0.0) {
        link.established = true;
        link.establish_done_at = ctx.now_s;
      } else {
        out.establish_s = ms / 1000.0;
        link.establishing = true;
        link.establish_done_at = ctx.now_s + out.establish_s;
        out.link_started = true;
      }
    }
  }

  // Erasure.
  const double d = distance(ctx.tx, ctx.rx);
  bool erased = false;
  switch (profile.name) {
    case RatId::dsrc:
    case RatId::dsrc_px: {
      const double p_ok = pdr_at_distance(profile, d, models.dsrc) *
                          (1.0 - dsrc_erasure_prob(ctx.density, models.dsrc));
      erased = !rng.bernoulli(p_ok);
      break;
    }
    case RatId::mmwave:
      erased = rng.bernoulli(models.mmwave.p_blockage(d));
      break;
    case RatId::cv2x:
      break;
  }

  // Serialization on the shared medium.
  const double bits = static_cast<double>(msg.bytes) * 8.0;
  double rate = profile.net_cap_bps;
  double overhead = 0.0;
  if (profile.name == RatId::mmwave) {
    overhead = std::clamp(ctx.bi_overhead, 0.0, 0.999999);
    rate = profile.max_phy_rate_bps() * (1.0 - overhead);
  }
  const double ready = ctx.now_s + out.establish_s;
  const double start = std::max(ready, channel.busy_until_s);
  out.queue_s = start - ready;
  if (out.queue_s > channel.max_queue_s) return finish(MessageStatus::erased);

  out.serialization_s = bits / rate;
  channel.busy_until_s = start + out.serialization_s;
  channel.airtime_s += out.serialization_s;
  channel.training_s += out.serialization_s * overhead;
  channel.bits_on_air += bits;
  channel.max_instant_rate_bps = std::max(channel.max_instant_rate_bps, rate);

  out.latency_s = latency_sample(profile, ctx.mode, rng) / 1000.0;
  out.t_rx_s = start + out.serialization_s + out.latency_s;
  if (erased) return finish(MessageStatus::erased);

  if (channel.window_cap_bits) {
    const auto w = static_cast<std::int64_t>(std::floor(out.t_rx_s));
    double& used = channel.window_bits[w];
    if (used + bits > *channel.window_cap_bits) return finish(MessageStatus::erased);
    used += bits;
    // Windows far behind the clock can no longer receive deliveries.
    while (!channel.window_bits.empty() &&
           channel.window_bits.begin()->first < static_cast<std::int64_t>(std::floor(ctx.now_s)) - 1) {
      channel.window_bits.erase(channel.window_bits.begin());
    }
  }
  channel.bits_delivered += bits;
  return finish(MessageStatus::delivered);
}

}  // namespace cits
