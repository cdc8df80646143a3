#include "cits/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cits/error.hpp"
#include "json.hpp"

namespace cits {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Strict object reader: every key must be consumed before finish().
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  const json* get(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  bool present(const std::string& key) const { return j_.contains(key); }
  bool present(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }
  bool has(const std::string& key) { return present(key) && !j_.at(key).is_null(); }

  double number(const std::string& key, double fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    return as_number(*v, at(key));
  }

  double required_number(const std::string& key) {
    const json* v = get(key);
    if (!v) throw ConfigError(at(key), "required");
    return as_number(*v, at(key));
  }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ConfigError(at(key), "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(at(key), "expected a boolean");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::string required_string(const std::string& key) {
    const json* v = get(key);
    if (!v) throw ConfigError(at(key), "required");
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Position as_position(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [x, y]");
  return {Reader::as_number(v[0], index_path(path, 0)), Reader::as_number(v[1], index_path(path, 1))};
}

Interval as_interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  Interval iv{Reader::as_number(v[0], index_path(path, 0)), Reader::as_number(v[1], index_path(path, 1))};
  if (!iv.valid()) throw ConfigError(path, "inverted interval");
  return iv;
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

RatId as_rat(const std::string& name, const std::string& path) {
  const auto rat = parse_rat(name);
  if (!rat) throw ConfigError(path, "unknown RAT '" + name + "'");
  return *rat;
}

LayerId as_layer(const std::string& name, const std::string& path) {
  const auto layer = parse_layer(name);
  if (!layer) throw ConfigError(path, "unknown layer '" + name + "'");
  return *layer;
}

ServiceId as_service(const std::string& name, const std::string& path) {
  const auto s = parse_service(name);
  if (!s) throw ConfigError(path, "unknown service '" + name + "'");
  return *s;
}

std::string_view to_string(Coverage c) { return c == Coverage::ubiquitous ? "ubiquitous" : "intermittent"; }

std::string_view to_string(V2vMode m) {
  switch (m) {
    case V2vMode::direct: return "direct";
    case V2vMode::pc5: return "pc5";
    case V2vMode::none: return "none";
  }
  return "none";
}

void read_profile(Reader& r, RatProfile& p) {
  if (const json* v = r.get("freq_bands_ghz")) {
    p.freq_bands_ghz.clear();
    const auto& arr = as_array(*v, r.at("freq_bands_ghz"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      p.freq_bands_ghz.push_back(as_interval(arr[i], index_path(r.at("freq_bands_ghz"), i)));
    }
  }
  p.channel_bw_mhz = r.number("channel_bw_mhz", p.channel_bw_mhz);
  p.range_m = r.number("range_m", p.range_m);
  if (const json* v = r.get("phy_rate_bps")) p.phy_rate_bps = as_interval(*v, r.at("phy_rate_bps"));
  p.net_cap_bps = r.number("net_cap_bps", p.net_cap_bps);
  if (const json* v = r.get("e2e_v2i_ms")) p.e2e_v2i_ms = as_interval(*v, r.at("e2e_v2i_ms"));
  if (const json* v = r.get("e2e_v2v_ms")) p.e2e_v2v_ms = as_interval(*v, r.at("e2e_v2v_ms"));
  if (const json* v = r.get("establishment_ms")) p.establishment_ms = as_interval(*v, r.at("establishment_ms"));
  if (r.has("coverage")) {
    const auto c = r.string("coverage", "");
    if (c == "ubiquitous") p.coverage = Coverage::ubiquitous;
    else if (c == "intermittent") p.coverage = Coverage::intermittent;
    else throw ConfigError(r.at("coverage"), "expected ubiquitous or intermittent");
  }
  if (r.present("mobility_limit_kmh")) {
    // An explicit null lifts the limit.
    if (const json* v = r.get("mobility_limit_kmh")) {
      p.mobility_limit_kmh = Reader::as_number(*v, r.at("mobility_limit_kmh"));
    } else {
      p.mobility_limit_kmh.reset();
    }
  }
  p.broadcast = r.boolean("broadcast", p.broadcast);
  if (r.has("v2v_mode")) {
    const auto m = r.string("v2v_mode", "");
    if (m == "direct") p.v2v_mode = V2vMode::direct;
    else if (m == "pc5") p.v2v_mode = V2vMode::pc5;
    else if (m == "none") p.v2v_mode = V2vMode::none;
    else throw ConfigError(r.at("v2v_mode"), "expected direct, pc5 or none");
  }
  r.finish();
}

json profile_json(const RatProfile& p) {
  json j;
  json bands = json::array();
  for (const auto& b : p.freq_bands_ghz) bands.push_back({b.lo, b.hi});
  j["freq_bands_ghz"] = bands;
  j["channel_bw_mhz"] = p.channel_bw_mhz;
  j["range_m"] = p.range_m;
  j["phy_rate_bps"] = {p.phy_rate_bps.lo, p.phy_rate_bps.hi};
  j["net_cap_bps"] = p.net_cap_bps;
  j["e2e_v2i_ms"] = {p.e2e_v2i_ms.lo, p.e2e_v2i_ms.hi};
  j["e2e_v2v_ms"] = {p.e2e_v2v_ms.lo, p.e2e_v2v_ms.hi};
  j["establishment_ms"] = {p.establishment_ms.lo, p.establishment_ms.hi};
  j["coverage"] = std::string(to_string(p.coverage));
  j["mobility_limit_kmh"] = p.mobility_limit_kmh ? json(*p.mobility_limit_kmh) : json(nullptr);
  j["broadcast"] = p.broadcast;
  j["v2v_mode"] = std::string(to_string(p.v2v_mode));
  return j;
}

CatalogEntry read_catalog_entry(Reader& r, const MessageCatalog& builtin) {
  CatalogEntry e;
  e.msg_type = r.required_string("msg_type");
  e.service = as_service(r.required_string("service"), r.at("service"));
  const CatalogEntry* base = builtin.find(e.service, e.msg_type);
  if (base) e = *base;
  if (r.has("layer")) {
    e.layer = as_layer(r.string("layer", ""), r.at("layer"));
  } else if (!base) {
    try {
      e.layer = classify_layer(e.msg_type, builtin);
    } catch (const Error&) {
      throw ConfigError(r.at("layer"), "required for new message type '" + e.msg_type + "'");
    }
  }
  if (const json* v = r.get("rate_bps")) e.rate_bps = as_interval(*v, r.at("rate_bps"));
  if (r.has("geo")) {
    const auto g = parse_geo(r.string("geo", ""));
    if (!g) throw ConfigError(r.at("geo"), "expected local, fog_area or city");
    e.geo = *g;
  }
  e.reliable = r.boolean("reliable", base ? e.reliable : e.layer != LayerId::enh2);
  if (r.has("payload_bytes")) {
    const auto bytes = r.u64("payload_bytes", 0);
    if (bytes == 0 || bytes > 0xffffffffULL) throw ConfigError(r.at("payload_bytes"), "must be in [1, 2^32)");
    e.payload_bytes = static_cast<std::uint32_t>(bytes);
  }
  if (r.has("period_s")) e.period_s = r.number("period_s", 0.0);
  e.enabled = r.boolean("enabled", e.enabled);
  r.finish();

  if (e.layer == LayerId::enh2 && e.reliable) {
    throw ConfigError(r.at("reliable"), "enhancement-2 streams carry no reliability guarantee");
  }
  if (e.layer == LayerId::base) {
    if (e.geo != GeoRelevance::local) throw ConfigError(r.at("geo"), "base-layer streams are local");
    if (!e.period_s) e.period_s = kMinBsmPeriodS;
    if (*e.period_s < kMinBsmPeriodS) throw ConfigError(r.at("period_s"), "below the 0.1 s floor");
  }
  if (e.period_s && !(*e.period_s > 0.0)) throw ConfigError(r.at("period_s"), "must be > 0");
  if (!e.period_s && !(e.rate_bps.lo > 0.0)) throw ConfigError(r.at("rate_bps"), "rates must be > 0");
  return e;
}

json catalog_entry_json(const CatalogEntry& e) {
  json j;
  j["msg_type"] = e.msg_type;
  j["service"] = std::string(to_string(e.service));
  j["layer"] = std::string(to_string(e.layer));
  j["rate_bps"] = {e.rate_bps.lo, e.rate_bps.hi};
  j["geo"] = std::string(to_string(e.geo));
  j["reliable"] = e.reliable;
  j["payload_bytes"] = e.payload_bytes ? json(*e.payload_bytes) : json(nullptr);
  j["period_s"] = e.period_s ? json(*e.period_s) : json(nullptr);
  j["enabled"] = e.enabled;
  return j;
}

double positive(Reader& r, const std::string& key, double fallback) {
  const double v = r.number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(r.at(key), "must be > 0");
  return v;
}

void read_policy(Reader& r, SimPolicy& p) {
  if (const json* v = r.get("layer_rat_map")) {
    Reader m(*v, r.at("layer_rat_map"));
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      const std::string layer(to_string(static_cast<LayerId>(i)));
      if (m.has(layer)) p.control.layer_rat_map[i] = as_rat(m.string(layer, ""), m.at(layer));
    }
    m.finish();
  }
  if (const json* v = r.get("priority")) {
    const auto& arr = as_array(*v, r.at("priority"));
    if (arr.size() != kLayerCount) throw ConfigError(r.at("priority"), "must list the three layers");
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      if (!arr[i].is_string()) throw ConfigError(index_path(r.at("priority"), i), "expected a layer name");
      p.control.priority[i] = as_layer(arr[i].get<std::string>(), index_path(r.at("priority"), i));
    }
  }
  p.control.px_enabled = r.boolean("px_enabled", p.control.px_enabled);
  p.control.escalation_enabled = r.boolean("escalation_enabled", p.control.escalation_enabled);
  if (const json* v = r.get("load_caps_bps")) {
    Reader caps(*v, r.at("load_caps_bps"));
    for (std::size_t i = 0; i < kRatCount; ++i) {
      const std::string rat(to_string(kAllRats[i]));
      if (caps.has(rat)) p.control.load_caps_bps[i] = caps.number(rat, 0.0);
    }
    caps.finish();
  }
  if (r.has("max_deferrals")) p.control.max_deferrals = static_cast<int>(r.u64("max_deferrals", 10));
  if (const json* v = r.get("assist")) {
    if (v->is_boolean()) p.assist = v->get<bool>();
    else if (v->is_string() && (*v == "on" || *v == "off")) p.assist = *v == "on";
    else throw ConfigError(r.at("assist"), "expected true/false or \"on\"/\"off\"");
  }
  p.bsm_period_s = r.number("bsm_period_s", p.bsm_period_s);
  if (p.bsm_period_s < kMinBsmPeriodS) {
    throw ConfigError(r.at("bsm_period_s"), "below the 0.1 s BSM floor");
  }
  if (r.has("bsm_payload_bytes")) {
    const auto bytes = r.u64("bsm_payload_bytes", 300);
    if (bytes == 0 || bytes > 0xffffffffULL) throw ConfigError(r.at("bsm_payload_bytes"), "must be in [1, 2^32)");
    p.bsm_payload_bytes = static_cast<std::uint32_t>(bytes);
  }
  p.handover_period_s = positive(r, "handover_period_s", p.handover_period_s);
  p.cloud_sync_period_s = positive(r, "cloud_sync_period_s", p.cloud_sync_period_s);
  p.mobility_step_s = positive(r, "mobility_step_s", p.mobility_step_s);
  p.track_staleness_s = positive(r, "track_staleness_s", p.track_staleness_s);
  p.max_queue_delay_ms = r.number("max_queue_delay_ms", p.max_queue_delay_ms);
  if (p.max_queue_delay_ms < 0.0) throw ConfigError(r.at("max_queue_delay_ms"), "must be >= 0");
  r.finish();
  validate(p.control);
}

}  // namespace

Scenario parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  Reader top(doc, "");
  Scenario s;
  s.duration_s = top.required_number("duration_s");
  if (!(s.duration_s > 0.0)) throw ConfigError("duration_s", "must be > 0");
  s.seed = top.u64("seed", s.seed);

  if (const json* v = top.get("fog_areas")) {
    const auto& arr = as_array(*v, "fog_areas");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader r(arr[i], index_path("fog_areas", i));
      FogAreaConfig a;
      a.id = r.required_string("id");
      const json* c = r.get("center");
      if (!c) throw ConfigError(r.at("center"), "required");
      a.center = as_position(*c, r.at("center"));
      a.cloud_latency_ms = r.number("cloud_latency_ms", a.cloud_latency_ms);
      if (a.cloud_latency_ms < 0.0) throw ConfigError(r.at("cloud_latency_ms"), "must be >= 0");
      r.finish();
      s.fog_areas.push_back(std::move(a));
    }
  }

  if (const json* v = top.get("rsus")) {
    const auto& arr = as_array(*v, "rsus");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader r(arr[i], index_path("rsus", i));
      RsuConfig u;
      u.id = r.required_string("id");
      u.rat = as_rat(r.required_string("rat"), r.at("rat"));
      const json* p = r.get("position");
      if (!p) throw ConfigError(r.at("position"), "required");
      u.position = as_position(*p, r.at("position"));
      u.area = r.string("area", "");
      r.finish();
      s.rsus.push_back(std::move(u));
    }
  }

  if (const json* v = top.get("vehicles")) {
    const auto& arr = as_array(*v, "vehicles");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader r(arr[i], index_path("vehicles", i));
      VehicleConfig c;
      c.id = r.required_string("id");
      c.trace = r.boolean("trace", false);
      if (const json* p = r.get("position")) c.position = as_position(*p, r.at("position"));
      c.speed_mps = r.number("speed_mps", 0.0);
      if (c.speed_mps < 0.0) throw ConfigError(r.at("speed_mps"), "must be >= 0");
      c.heading_rad = r.number("heading_rad", 0.0);
      if (const json* rt = r.get("route")) {
        const auto& pts = as_array(*rt, r.at("route"));
        for (std::size_t k = 0; k < pts.size(); ++k) c.route.push_back(as_position(pts[k], index_path(r.at("route"), k)));
      }
      c.loop = r.boolean("loop", false);
      if (const json* sv = r.get("services")) {
        const auto& names = as_array(*sv, r.at("services"));
        for (std::size_t k = 0; k < names.size(); ++k) {
          const auto path = index_path(r.at("services"), k);
          if (!names[k].is_string()) throw ConfigError(path, "expected a service name");
          const ServiceId id = as_service(names[k].get<std::string>(), path);
          if (id == ServiceId::safety_core) continue;  // always on
          c.services.push_back(id);
        }
      }
      r.finish();
      s.vehicles.push_back(std::move(c));
    }
  }

  if (top.has("trace_file")) {
    std::filesystem::path p = top.string("trace_file", "");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.trace_file = p;
  } else {
    top.get("trace_file");
  }

  if (const json* v = top.get("rat_overrides")) {
    Reader r(*v, "rat_overrides");
    for (const auto rat : kAllRats) {
      const std::string name(to_string(rat));
      if (const json* o = r.get(name)) {
        Reader pr(*o, r.at(name));
        read_profile(pr, s.profiles[index_of(rat)]);
      }
    }
    r.finish();
  }

  if (const json* v = top.get("dsrc_model")) {
    Reader r(*v, "dsrc_model");
    auto& m = s.models.dsrc;
    m.p0 = r.number("p0", m.p0);
    m.n0 = positive(r, "n0", m.n0);
    m.gamma = r.number("gamma", m.gamma);
    m.p_max = r.number("p_max", m.p_max);
    m.pdr_scale_m = positive(r, "pdr_scale_m", m.pdr_scale_m);
    m.px_gain = r.number("px_gain", m.px_gain);
    r.finish();
    if (m.p0 < 0.0 || m.p0 > 1.0) throw ConfigError("dsrc_model.p0", "must lie in [0, 1]");
    if (m.p_max < 0.0 || m.p_max > 1.0) throw ConfigError("dsrc_model.p_max", "must lie in [0, 1]");
    if (m.px_gain < 1.0) throw ConfigError("dsrc_model.px_gain", "must be >= 1");
  }

  if (const json* v = top.get("mmwave")) {
    Reader r(*v, "mmwave");
    auto& m = s.models.mmwave;
    m.pl0_db = r.number("pl0_db", m.pl0_db);
    m.n_los = r.number("n_los", m.n_los);
    m.n_nlos = r.number("n_nlos", m.n_nlos);
    m.blockage_slope_per_m = r.number("blockage_slope_per_m", m.blockage_slope_per_m);
    m.blockage_max = r.number("blockage_max", m.blockage_max);
    m.bi_length_ms = r.number("bi_length_ms", m.bi_length_ms);
    m.overhead_no_assist = r.number("overhead_no_assist", m.overhead_no_assist);
    m.overhead_with_assist = r.number("overhead_with_assist", m.overhead_with_assist);
    if (r.has("n_sectors")) m.n_sectors = static_cast<int>(r.u64("n_sectors", 16));
    r.finish();
  }

  if (const json* v = top.get("payload_defaults")) {
    Reader r(*v, "payload_defaults");
    auto& pd = s.catalog.payloads;
    pd.base = static_cast<std::uint32_t>(r.u64("base", pd.base));
    pd.enh1 = static_cast<std::uint32_t>(r.u64("enh1", pd.enh1));
    pd.enh2 = static_cast<std::uint32_t>(r.u64("enh2", pd.enh2));
    r.finish();
    if (pd.base == 0 || pd.enh1 == 0 || pd.enh2 == 0) throw ConfigError("payload_defaults", "sizes must be > 0");
  }

  if (const json* v = top.get("catalog")) {
    const auto& arr = as_array(*v, "catalog");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader r(arr[i], index_path("catalog", i));
      s.catalog.upsert(read_catalog_entry(r, s.catalog));
    }
  }

  if (const json* v = top.get("policy")) {
    Reader r(*v, "policy");
    read_policy(r, s.policy);
  }
  top.finish();

  // Fill omitted RSU areas from the partition.
  if (!s.fog_areas.empty()) {
    std::vector<FogArea> areas;
    for (const auto& a : s.fog_areas) areas.push_back({a.id, a.center, {}, a.cloud_latency_ms});
    for (auto& u : s.rsus) {
      if (u.area.empty()) u.area = areas[assign_fog_area(u.position, areas)].id;
    }
  }
  validate(s);
  return s;
}

Scenario load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open scenario " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

void validate(const Scenario& s) {
  if (!(s.duration_s > 0.0)) throw ConfigError("duration_s", "must be > 0");
  if (s.fog_areas.empty()) throw ConfigError("fog_areas", "at least one fog area is required");

  std::set<std::string> area_ids;
  std::vector<FogArea> areas;
  for (std::size_t i = 0; i < s.fog_areas.size(); ++i) {
    const auto& a = s.fog_areas[i];
    if (a.id.empty()) throw ConfigError(index_path("fog_areas", i) + ".id", "must not be empty");
    if (!area_ids.insert(a.id).second) throw ConfigError(index_path("fog_areas", i) + ".id", "duplicate id");
    areas.push_back({a.id, a.center, {}, a.cloud_latency_ms});
  }

  std::set<std::string> rsu_ids;
  for (std::size_t i = 0; i < s.rsus.size(); ++i) {
    const auto& u = s.rsus[i];
    const auto path = index_path("rsus", i);
    if (!rsu_ids.insert(u.id).second) throw ConfigError(path + ".id", "duplicate id");
    if (!area_ids.count(u.area)) throw ConfigError(path + ".area", "undefined fog area '" + u.area + "'");
    const auto& expected = areas[assign_fog_area(u.position, areas)].id;
    if (expected != u.area) {
      throw ConfigError(path + ".area", "position lies in fog area '" + expected + "', not '" + u.area + "'");
    }
  }

  std::set<std::string> vehicle_ids;
  for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
    const auto& v = s.vehicles[i];
    const auto path = index_path("vehicles", i);
    if (v.id.empty()) throw ConfigError(path + ".id", "must not be empty");
    if (v.id == "broadcast") throw ConfigError(path + ".id", "reserved id");
    if (rsu_ids.count(v.id)) throw ConfigError(path + ".id", "clashes with an RSU id");
    if (!vehicle_ids.insert(v.id).second) throw ConfigError(path + ".id", "duplicate id");
    if (v.speed_mps < 0.0) throw ConfigError(path + ".speed_mps", "must be >= 0");
    if (v.trace && !s.trace_file) throw ConfigError(path + ".trace", "no trace_file configured");
  }

  for (const auto rat : kAllRats) {
    try {
      validate(s.profile(rat));
    } catch (const ConfigError& e) {
      throw ConfigError("rat_overrides." + e.path(), "invalid profile");
    }
  }
  validate(s.models.mmwave);
  validate(s.policy.control);
  check_bsm_period(s.policy.bsm_period_s);
}

std::string serialize(const Scenario& s) {
  json j;
  j["duration_s"] = s.duration_s;
  j["seed"] = s.seed;
  j["fog_areas"] = json::array();
  for (const auto& a : s.fog_areas) {
    j["fog_areas"].push_back({{"id", a.id}, {"center", {a.center.x, a.center.y}}, {"cloud_latency_ms", a.cloud_latency_ms}});
  }
  j["rsus"] = json::array();
  for (const auto& u : s.rsus) {
    j["rsus"].push_back({{"id", u.id},
                         {"rat", std::string(to_string(u.rat))},
                         {"position", {u.position.x, u.position.y}},
                         {"area", u.area}});
  }
  j["vehicles"] = json::array();
  for (const auto& v : s.vehicles) {
    json o;
    o["id"] = v.id;
    o["position"] = {v.position.x, v.position.y};
    o["speed_mps"] = v.speed_mps;
    o["heading_rad"] = v.heading_rad;
    o["route"] = json::array();
    for (const auto& p : v.route) o["route"].push_back({p.x, p.y});
    o["loop"] = v.loop;
    o["trace"] = v.trace;
    o["services"] = json::array();
    for (const auto svc : v.services) o["services"].push_back(std::string(to_string(svc)));
    j["vehicles"].push_back(o);
  }
  if (s.trace_file) j["trace_file"] = s.trace_file->generic_string();

  json overrides;
  for (const auto rat : kAllRats) overrides[std::string(to_string(rat))] = profile_json(s.profile(rat));
  j["rat_overrides"] = overrides;

  const auto& d = s.models.dsrc;
  j["dsrc_model"] = {{"p0", d.p0}, {"n0", d.n0}, {"gamma", d.gamma}, {"p_max", d.p_max},
                     {"pdr_scale_m", d.pdr_scale_m}, {"px_gain", d.px_gain}};
  const auto& m = s.models.mmwave;
  j["mmwave"] = {{"pl0_db", m.pl0_db},
                 {"n_los", m.n_los},
                 {"n_nlos", m.n_nlos},
                 {"blockage_slope_per_m", m.blockage_slope_per_m},
                 {"blockage_max", m.blockage_max},
                 {"bi_length_ms", m.bi_length_ms},
                 {"overhead_no_assist", m.overhead_no_assist},
                 {"overhead_with_assist", m.overhead_with_assist},
                 {"n_sectors", m.n_sectors}};
  const auto& pd = s.catalog.payloads;
  j["payload_defaults"] = {{"base", pd.base}, {"enh1", pd.enh1}, {"enh2", pd.enh2}};
  j["catalog"] = json::array();
  for (const auto& e : s.catalog.entries()) j["catalog"].push_back(catalog_entry_json(e));

  const auto& p = s.policy;
  json policy;
  json map;
  for (std::size_t i = 0; i < kLayerCount; ++i) {
    map[std::string(to_string(static_cast<LayerId>(i)))] = std::string(to_string(p.control.layer_rat_map[i]));
  }
  policy["layer_rat_map"] = map;
  policy["priority"] = json::array();
  for (const auto layer : p.control.priority) policy["priority"].push_back(std::string(to_string(layer)));
  policy["px_enabled"] = p.control.px_enabled;
  policy["escalation_enabled"] = p.control.escalation_enabled;
  json caps = json::object();
  for (std::size_t i = 0; i < kRatCount; ++i) {
    if (p.control.load_caps_bps[i]) caps[std::string(to_string(kAllRats[i]))] = *p.control.load_caps_bps[i];
  }
  policy["load_caps_bps"] = caps;
  policy["max_deferrals"] = p.control.max_deferrals;
  policy["assist"] = p.assist;
  policy["bsm_period_s"] = p.bsm_period_s;
  policy["bsm_payload_bytes"] = p.bsm_payload_bytes;
  policy["handover_period_s"] = p.handover_period_s;
  policy["cloud_sync_period_s"] = p.cloud_sync_period_s;
  policy["mobility_step_s"] = p.mobility_step_s;
  policy["track_staleness_s"] = p.track_staleness_s;
  policy["max_queue_delay_ms"] = p.max_queue_delay_ms;
  j["policy"] = policy;
  return j.dump(2) + "\n";
}

}  // namespace cits
