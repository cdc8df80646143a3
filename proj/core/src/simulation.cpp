#include "cits/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "cits/error.hpp"

namespace cits {

namespace {

constexpr double kMpsToKmh = 3.6;

// RSU radio serving a RAT; 802.11px runs on the DSRC roadside units.
RatId radio_of(RatId rat) { return rat == RatId::dsrc_px ? RatId::dsrc : rat; }

// Tick times are k * period; only ticks strictly inside the horizon exist.
bool inside(std::uint64_t k, double period, double horizon) {
  return static_cast<double>(k) * period < horizon;
}

std::uint64_t link_key(std::uint32_t endpoint, RatId rat) {
  return static_cast<std::uint64_t>(endpoint) * kRatCount + index_of(rat);
}

}  // namespace

Simulation::Simulation(const Scenario& scenario) : scenario_(scenario) {
  validate(scenario_);
  const auto& policy = scenario_.policy;

  for (const auto& a : scenario_.fog_areas) areas_.push_back({a.id, a.center, {}, a.cloud_latency_ms});
  area_rsus_.resize(areas_.size());

  std::vector<const RsuConfig*> rsu_cfg;
  for (const auto& r : scenario_.rsus) rsu_cfg.push_back(&r);
  std::sort(rsu_cfg.begin(), rsu_cfg.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::vector<const VehicleConfig*> veh_cfg;
  for (const auto& v : scenario_.vehicles) veh_cfg.push_back(&v);
  std::sort(veh_cfg.begin(), veh_cfg.end(), [](auto* a, auto* b) { return a->id < b->id; });

  for (const auto* v : veh_cfg) names_.intern(v->id);
  for (const auto* r : rsu_cfg) {
    Rsu rsu{r->id, r->rat, r->position, assign_fog_area(r->position, areas_)};
    areas_[rsu.fog_area].rsu_ids.push_back(rsu.id);
    area_rsus_[rsu.fog_area][index_of(rsu.rat)].push_back(rsus_.size());
    rsu_nodes_.push_back(names_.intern(rsu.id));
    rsus_.push_back(std::move(rsu));
  }

  const double max_queue_s = policy.max_queue_delay_ms / 1000.0;
  channels_.resize(rsus_.size() * kRatCount);
  for (std::size_t i = 0; i < rsus_.size(); ++i) {
    for (const auto rat : kAllRats) {
      Channel& c = channels_[i * kRatCount + index_of(rat)];
      c.max_queue_s = max_queue_s;
      // The DSRC family shares one channel with a hard usable-throughput cap.
      if (rat == RatId::dsrc || rat == RatId::dsrc_px) c.window_cap_bits = scenario_.profile(rat).net_cap_bps;
    }
  }
  dsrc_density_.assign(rsus_.size(), 0.0);

  if (scenario_.trace_file) trace_ = TraceSet(load_trace(*scenario_.trace_file));

  // Fog Orchestrators with their admission caps.
  for (std::size_t a = 0; a < areas_.size(); ++a) {
    FogOrchestratorState fo;
    fo.area = a;
    fo.area_id = areas_[a].id;
    fo.cloud_latency_ms = areas_[a].cloud_latency_ms;
    std::array<std::size_t, kRatCount> per_rat{};
    for (std::size_t r = 0; r < kRatCount; ++r) per_rat[r] = area_rsus_[a][r].size();
    // 802.11px reuses the DSRC roadside units.
    per_rat[index_of(RatId::dsrc_px)] = per_rat[index_of(RatId::dsrc)];
    fo.load.caps_bps = default_load_caps(scenario_.profiles, per_rat, policy.control);
    fos_.push_back(std::move(fo));
  }

  std::uint32_t next_stream = 0;
  for (std::size_t i = 0; i < veh_cfg.size(); ++i) {
    const auto& cfg = *veh_cfg[i];
    Vehicle v;
    v.id = cfg.id;
    v.position = cfg.position;
    v.speed = cfg.speed_mps;
    v.heading = normalize_heading(cfg.heading_rad);
    v.route.waypoints = cfg.route;
    v.route.loop = cfg.loop;
    if (cfg.trace) {
      if (!trace_ || !trace_->has(cfg.id)) {
        const auto at = static_cast<std::size_t>(&cfg - scenario_.vehicles.data());
        throw ConfigError("vehicles[" + std::to_string(at) + "].trace", "vehicle '" + cfg.id + "' missing from the trace file");
      }
      const auto st = trace_->state_at(cfg.id, 0.0);
      v.position = st->position;
      v.speed = st->speed;
      v.heading = normalize_heading(st->heading);
      v.trace = 0;
    }
    v.fog_area = assign_fog_area(v.position, areas_);

    VehicleState vs;
    vs.node = names_.intern(cfg.id);
    vs.bsm = bsm_descriptor(next_stream++, policy.bsm_period_s, policy.bsm_payload_bytes);
    RngStream rates(scenario_.seed, "vehicle/" + cfg.id + "/rates");
    for (const auto service : cfg.services) {
      auto streams = service_streams(service, scenario_.catalog, rates, next_stream);
      next_stream += static_cast<std::uint32_t>(streams.size());
      for (auto& d : streams) vs.streams.push_back({std::move(d), std::nullopt, {}});
    }
    for (const auto rat : kAllRats) {
      vs.link_rng[index_of(rat)] = RngStream(scenario_.seed, "link/" + std::string(to_string(rat)) + "/" + cfg.id);
    }
    vs.sidelink.max_queue_s = max_queue_s;

    fos_[v.fog_area].registered.insert(static_cast<std::uint32_t>(i));
    vehicles_.push_back(std::move(v));
    state_.push_back(std::move(vs));
  }
  recompute_density();
  admit_initial();

  // Initial events. SimEnd goes first so it precedes every other event at
  // the horizon.
  const double T = scenario_.duration_s;
  queue_.schedule(T, SimEnd{});
  if (inside(1, policy.mobility_step_s, T)) queue_.schedule(policy.mobility_step_s, MobilityStep{1});
  if (inside(1, policy.handover_period_s, T)) queue_.schedule(policy.handover_period_s, HandoverCheck{1});
  if (policy.cloud_sync_period_s <= T) queue_.schedule(policy.cloud_sync_period_s, CloudSync{1});
  for (std::size_t v = 0; v < vehicles_.size(); ++v) {
    queue_.schedule(0.0, BsmTick{static_cast<std::uint32_t>(v), 0});
    for (std::size_t s = 0; s < state_[v].streams.size(); ++s) {
      queue_.schedule(0.0, StreamTick{static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(s), 0});
    }
  }
}

std::optional<std::size_t> Simulation::vehicle_index(const std::string& id) const {
  const auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), id,
                                   [](const Vehicle& v, const std::string& key) { return v.id < key; });
  if (it == vehicles_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - vehicles_.begin());
}

std::uint64_t Simulation::run_until(double t_end) {
  const auto n = cits::run_until(queue_, t_end, [this](const Event& e) {
    handle(e);
    ++events_;
    if (observer_) observer_(e, *this);
  });
  return n;
}

void Simulation::handle(const Event& e) {
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MobilityStep>) {
          on_mobility(e.time);
          const std::uint64_t k = p.k + 1;
          if (inside(k, scenario_.policy.mobility_step_s, scenario_.duration_s)) {
            queue_.schedule(static_cast<double>(k) * scenario_.policy.mobility_step_s, MobilityStep{k});
          }
        } else if constexpr (std::is_same_v<P, BsmTick>) {
          on_bsm(p.vehicle, p.k);
        } else if constexpr (std::is_same_v<P, StreamTick>) {
          on_stream(p.vehicle, p.stream, p.k);
        } else if constexpr (std::is_same_v<P, TxComplete>) {
          const std::size_t area = vehicles_.at(p.vehicle).fog_area;
          register_bsm(fos_[area], p.vehicle, KinematicState{{p.x, p.y}, p.speed, p.heading}, e.time);
        } else if constexpr (std::is_same_v<P, LinkEstablished>) {
          auto& vs = state_.at(p.link >> 32);
          const auto it = vs.links.find(p.link & 0xffffffffULL);
          if (it != vs.links.end() && it->second.establishing && it->second.establish_done_at <= e.time) {
            it->second.established = true;
            it->second.establishing = false;
          }
        } else if constexpr (std::is_same_v<P, HandoverCheck>) {
          on_handover(e.time);
          const std::uint64_t k = p.k + 1;
          if (inside(k, scenario_.policy.handover_period_s, scenario_.duration_s)) {
            queue_.schedule(static_cast<double>(k) * scenario_.policy.handover_period_s, HandoverCheck{k});
          }
        } else if constexpr (std::is_same_v<P, CloudSync>) {
          on_cloud_sync(e.time);
          const std::uint64_t k = p.k + 1;
          if (static_cast<double>(k) * scenario_.policy.cloud_sync_period_s <= scenario_.duration_s) {
            queue_.schedule(static_cast<double>(k) * scenario_.policy.cloud_sync_period_s, CloudSync{k});
          }
        } else if constexpr (std::is_same_v<P, SimEnd>) {
          on_end();
        }
      },
      e.payload);
}

void Simulation::on_mobility(double t) {
  const double dt = scenario_.policy.mobility_step_s;
  for (auto& v : vehicles_) {
    if (v.trace) {
      const auto st = trace_->state_at(v.id, t);
      v.position = st->position;
      v.speed = st->speed;
      v.heading = normalize_heading(st->heading);
    } else {
      v = advance_vehicle(std::move(v), dt);
    }
  }
  recompute_density();
}

void Simulation::recompute_density() {
  const double range = scenario_.profile(RatId::dsrc).range_m;
  const double r2 = range * range;
  for (std::size_t i = 0; i < rsus_.size(); ++i) {
    if (rsus_[i].rat != RatId::dsrc) continue;
    std::size_t n = 0;
    for (const auto& v : vehicles_) n += distance_sq(v.position, rsus_[i].position) <= r2;
    dsrc_density_[i] = static_cast<double>(n);
  }
}

std::optional<std::size_t> Simulation::nearest_rsu(std::size_t v, RatId rat) const {
  const auto& candidates = area_rsus_[vehicles_[v].fog_area][index_of(radio_of(rat))];
  std::optional<std::size_t> best;
  double best_d = 0.0;
  // Candidates are in id order, so the first of equal distances wins.
  for (const auto i : candidates) {
    const double d = distance_sq(vehicles_[v].position, rsus_[i].position);
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

RatAvailability Simulation::availability(std::size_t v) const {
  RatAvailability a;
  const double kmh = vehicles_[v].speed * kMpsToKmh;
  for (const auto rat : kAllRats) {
    if (rat == RatId::dsrc_px && !scenario_.policy.control.px_enabled) continue;
    const auto rsu = nearest_rsu(v, rat);
    a.set(rat, rsu && in_coverage(scenario_.profile(rat), vehicles_[v].position, rsus_[*rsu].position, kmh));
  }
  return a;
}

Simulation::Route Simulation::route(std::size_t v, StreamState* stream, LayerId layer, double t) {
  (void)t;
  const auto& policy = scenario_.policy.control;
  auto& fo = fos_[vehicles_[v].fog_area];
  Route r;

  RatId admitted = policy.primary_rat(layer);
  double rate = 0.0;
  if (layer != LayerId::base) {
    rate = stream->descriptor.rate_bps;
    if (!stream->reserved) {
      const auto d = service_engine_admit(stream->descriptor, fo.load, policy);
      if (d.verdict == Verdict::defer) {
        r.kind = RouteKind::defer;
        return r;
      }
      if (d.verdict == Verdict::reject) {
        r.kind = RouteKind::drop_policy;
        r.rat = admitted;
        return r;
      }
      if (d.reserves) fo.load.commit(*d.rat, rate);
      stream->reserved = *d.rat;
    }
    admitted = *stream->reserved;
  }

  Message probe;
  probe.layer = layer;
  const auto sel = access_controller_select(probe, layer, admitted, availability(v), fo.load, rate, policy);
  switch (sel.kind) {
    case SelectionKind::defer:
      r.kind = RouteKind::defer;
      return r;
    case SelectionKind::drop:
      r.kind = RouteKind::drop_coverage;
      r.rat = admitted;
      return r;
    case SelectionKind::rat:
      break;
  }
  if (sel.moved_to_px) {
    fo.load.release(admitted, rate);
    fo.load.commit(RatId::dsrc_px, rate);
    stream->reserved = RatId::dsrc_px;
  }
  r.kind = RouteKind::send;
  r.rat = sel.rat;
  r.mode = sel.mode;
  // A Base fallback onto C-V2X goes over the PC5 sidelink, not an RSU.
  if (!(layer == LayerId::base && sel.rat == RatId::cv2x)) r.rsu = nearest_rsu(v, sel.rat);
  return r;
}

void Simulation::record(std::size_t v, const KpiRecord& rec) {
  sink_.record_outcome(rec);
  auto& fo = fos_[vehicles_[v].fog_area];
  switch (rec.status) {
    case MessageStatus::delivered:
    case MessageStatus::erased:
      buffer_record(fo, CloudRecordKind::admitted, rec.layer);
      break;
    case MessageStatus::dropped_no_coverage:
    case MessageStatus::dropped_policy:
      buffer_record(fo, CloudRecordKind::dropped, rec.layer);
      break;
    default:
      break;
  }
}

MessageStatus Simulation::send(std::size_t v, Message msg, const Route& r, double t,
                               const std::optional<KinematicState>& snapshot) {
  auto& vs = state_[v];
  const auto& veh = vehicles_[v];
  if (r.kind == RouteKind::drop_coverage || r.kind == RouteKind::drop_policy) {
    msg.rat = r.rat;
    const auto status = r.kind == RouteKind::drop_coverage ? MessageStatus::dropped_no_coverage
                                                           : MessageStatus::dropped_policy;
    record(v, make_record(msg, status));
    return status;
  }

  const RatProfile& profile = scenario_.profile(r.rat);
  TxContext ctx;
  ctx.mode = r.mode;
  ctx.tx = veh.position;
  ctx.speed_kmh = veh.speed * kMpsToKmh;
  ctx.now_s = t;
  Channel* channel = &vs.sidelink;
  std::uint32_t endpoint = 0;
  if (r.rsu) {
    const auto& rsu = rsus_[*r.rsu];
    ctx.rx = rsu.position;
    channel = &channels_[*r.rsu * kRatCount + index_of(r.rat)];
    endpoint = static_cast<std::uint32_t>(*r.rsu + 1);
    if (r.mode == LinkMode::v2i) msg.dst = rsu_nodes_[*r.rsu];
    if (r.rat == RatId::dsrc || r.rat == RatId::dsrc_px) ctx.density = dsrc_density_[*r.rsu];
    if (r.rat == RatId::mmwave) {
      ctx.bi_overhead = assist_overhead(fos_[veh.fog_area], static_cast<std::uint32_t>(v), t,
                                        AssistInputs{scenario_.policy.assist, scenario_.policy.track_staleness_s,
                                                     rsu.position, veh.position},
                                        scenario_.models.mmwave);
    }
  } else {
    ctx.rx = veh.position;
  }

  const auto key = link_key(endpoint, r.rat);
  auto [it, fresh] = vs.links.try_emplace(key);
  if (fresh) {
    it->second.vehicle = static_cast<std::uint32_t>(v);
    it->second.endpoint = endpoint;
    it->second.rat = r.rat;
  }
  const auto out = transmit(msg, profile, scenario_.models, ctx, it->second, *channel, vs.link_rng[index_of(r.rat)]);
  if (out.link_started) {
    queue_.schedule(it->second.establish_done_at, LinkEstablished{(static_cast<std::uint64_t>(v) << 32) | key});
  }
  record(v, out.record);

  if (out.status == MessageStatus::delivered && snapshot && r.rsu && r.rat == RatId::dsrc) {
    queue_.schedule(out.t_rx_s, TxComplete{msg.id, static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(*r.rsu),
                                           snapshot->position.x, snapshot->position.y, snapshot->speed,
                                           snapshot->heading});
  }

  // City-relevant traffic carried on a local RAT is re-broadcast over C-V2X.
  if (out.status != MessageStatus::dropped_no_coverage && out.status != MessageStatus::dropped_policy) {
    msg.rat = r.rat;
    if (auto dup = escalate_geo(msg, scenario_.policy.control, next_msg_id_)) {
      ++next_msg_id_;
      ++escalated_;
      buffer_record(fos_[veh.fog_area], CloudRecordKind::escalated, dup->layer);
      dup->created_at = t;
      dup->rat.reset();
      Route er;
      er.kind = RouteKind::drop_coverage;
      er.rat = RatId::cv2x;
      if (const auto rsu = nearest_rsu(v, RatId::cv2x);
          rsu && in_coverage(scenario_.profile(RatId::cv2x), veh.position, rsus_[*rsu].position, ctx.speed_kmh)) {
        er.kind = RouteKind::send;
        er.mode = LinkMode::broadcast;
        er.rsu = rsu;
      }
      send(v, *dup, er, t, std::nullopt);
    }
  }
  return out.status;
}

void Simulation::on_bsm(std::size_t v, std::uint64_t k) {
  auto& vs = state_[v];
  const auto& veh = vehicles_[v];
  const double t = static_cast<double>(k) * vs.bsm.period_s;
  const KinematicState snap{veh.position, veh.speed, veh.heading};
  auto bsm = bsm_tick(vs.bsm, vs.node, snap, t, next_msg_id_++);
  const auto r = route(v, nullptr, LayerId::base, t);
  send(v, bsm.message, r, t, snap);
  if (inside(k + 1, vs.bsm.period_s, scenario_.duration_s)) {
    queue_.schedule(static_cast<double>(k + 1) * vs.bsm.period_s, BsmTick{static_cast<std::uint32_t>(v), k + 1});
  }
}

void Simulation::on_stream(std::size_t v, std::size_t s, std::uint64_t k) {
  auto& vs = state_[v];
  auto& st = vs.streams[s];
  const auto& d = st.descriptor;
  const double t = static_cast<double>(k) * d.period_s;

  Message msg;
  msg.id = next_msg_id_++;
  msg.stream_id = d.id;
  msg.src = vs.node;
  msg.dst = kBroadcast;
  msg.bytes = d.payload_bytes;
  msg.created_at = t;
  msg.layer = d.layer;
  msg.service = d.service;
  msg.geo = d.geo;

  const auto r = route(v, &st, d.layer, t);
  if (r.kind == RouteKind::defer) {
    const int limit = scenario_.policy.control.max_deferrals;
    std::deque<Held> kept;
    for (auto& h : st.held) {
      ++h.deferrals;
      ++deferrals_;
      if (h.deferrals >= limit) {
        record(v, make_record(h.message, MessageStatus::deferred));
      } else {
        kept.push_back(std::move(h));
      }
    }
    st.held = std::move(kept);
    ++deferrals_;
    if (limit <= 1) {
      record(v, make_record(msg, MessageStatus::deferred));
    } else {
      st.held.push_back({msg, 1});
    }
  } else {
    // Retries go out ahead of the new message, oldest first.
    for (auto& h : st.held) {
      ++deferred_then_sent_;
      send(v, h.message, r, t, std::nullopt);
    }
    st.held.clear();
    send(v, msg, r, t, std::nullopt);
  }

  if (inside(k + 1, d.period_s, scenario_.duration_s)) {
    queue_.schedule(static_cast<double>(k + 1) * d.period_s,
                    StreamTick{static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(s), k + 1});
  }
}

void Simulation::admit_initial() {
  // Streams contending at start-up are admitted per area in strict priority.
  for (auto& fo : fos_) {
    std::vector<AdmissionRequest> reqs;
    std::vector<std::pair<std::size_t, std::size_t>> who;
    for (const auto v : fo.registered) {
      for (std::size_t s = 0; s < state_[v].streams.size(); ++s) {
        const auto& d = state_[v].streams[s].descriptor;
        if (d.layer == LayerId::base) continue;
        reqs.push_back({v, &d});
        who.emplace_back(v, s);
      }
    }
    const auto decisions = admit_batch(reqs, fo.load, scenario_.policy.control);
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      if (decisions[i].verdict == Verdict::admit) state_[who[i].first].streams[who[i].second].reserved = decisions[i].rat;
    }
  }
}

void Simulation::readmit(std::size_t v) {
  auto& fo = fos_[vehicles_[v].fog_area];
  std::vector<AdmissionRequest> reqs;
  std::vector<std::size_t> idx;
  for (std::size_t s = 0; s < state_[v].streams.size(); ++s) {
    const auto& d = state_[v].streams[s].descriptor;
    if (d.layer == LayerId::base) continue;
    reqs.push_back({static_cast<std::uint32_t>(v), &d});
    idx.push_back(s);
  }
  const auto decisions = admit_batch(reqs, fo.load, scenario_.policy.control);
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (decisions[i].verdict == Verdict::admit) state_[v].streams[idx[i]].reserved = decisions[i].rat;
  }
}

void Simulation::release_streams(std::size_t v) {
  auto& fo = fos_[vehicles_[v].fog_area];
  for (auto& st : state_[v].streams) {
    if (st.reserved) {
      fo.load.release(*st.reserved, st.descriptor.rate_bps);
      st.reserved.reset();
    }
  }
}

void Simulation::cancel_held(std::size_t v) {
  for (auto& st : state_[v].streams) {
    for (const auto& h : st.held) record(v, make_record(h.message, MessageStatus::deferred));
    st.held.clear();
  }
}

void Simulation::on_handover(double t) {
  (void)t;
  for (std::size_t v = 0; v < vehicles_.size(); ++v) {
    const std::size_t now = assign_fog_area(vehicles_[v].position, areas_);
    const std::size_t before = vehicles_[v].fog_area;
    if (now == before) continue;
    cancel_held(v);
    release_streams(v);
    handover(static_cast<std::uint32_t>(v), fos_[before], fos_[now]);
    vehicles_[v].fog_area = now;
    ++handovers_;
    readmit(v);
  }
}

void Simulation::on_cloud_sync(double t) {
  // Areas sync in id order.
  std::vector<std::size_t> order(fos_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fos_[a].area_id < fos_[b].area_id; });
  for (const auto a : order) cloud_.push_back(cloud_sync(fos_[a], t));
}

void Simulation::on_end() {
  ended_ = true;
  for (std::size_t v = 0; v < vehicles_.size(); ++v) cancel_held(v);
}

RunResult Simulation::finish() {
  if (queue_.clock() < scenario_.duration_s || !ended_) run_until(scenario_.duration_s);
  RunResult res;
  res.records = sink_.release();
  res.names = names_;
  res.summary = summarize(res.records, scenario_.duration_s);
  res.cloud = cloud_;
  res.events = events_;

  auto& x = res.summary.extras;
  x["deferrals"] = static_cast<double>(deferrals_);
  x["deferred_then_sent"] = static_cast<double>(deferred_then_sent_);
  x["escalated"] = static_cast<double>(escalated_);
  x["handovers"] = static_cast<double>(handovers_);
  x["events"] = static_cast<double>(events_);
  std::array<double, kRatCount> airtime{}, training{};
  for (std::size_t i = 0; i < rsus_.size(); ++i) {
    for (const auto rat : kAllRats) {
      const auto& c = channels_[i * kRatCount + index_of(rat)];
      airtime[index_of(rat)] += c.airtime_s;
      training[index_of(rat)] += c.training_s;
    }
  }
  for (const auto& vs : state_) airtime[index_of(RatId::cv2x)] += vs.sidelink.airtime_s;
  for (const auto rat : kAllRats) {
    x["airtime_s." + std::string(to_string(rat))] = airtime[index_of(rat)];
  }
  const double mm_air = airtime[index_of(RatId::mmwave)];
  if (mm_air > 0.0) x["mmwave_overhead_fraction"] = training[index_of(RatId::mmwave)] / mm_air;
  return res;
}

std::string cloud_jsonl(const std::vector<CloudBatch>& batches) {
  std::string out;
  for (const auto& b : batches) {
    out += cloud_batch_json(b);
    out += '\n';
  }
  return out;
}

RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir, OutputFormats formats) {
  Simulation sim(scenario);
  auto res = sim.finish();
  write_outputs(res.records, res.names, res.summary, out_dir, formats);
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(out_dir / name, std::ios::binary);
    out << text;
    if (!out) throw IoError("failed writing " + (out_dir / name).string());
  };
  write("cloud.jsonl", cloud_jsonl(res.cloud));
  write("effective_config.json", serialize(scenario));
  return res;
}

}  // namespace cits
