#include "cits/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <unordered_map>

#include "cits/error.hpp"

namespace cits {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw TraceError(line, std::string("invalid ") + name + " '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  std::unordered_map<std::string, double> last_t;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (line == 1 && text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    if (!header_seen) {
      if (text.empty()) continue;
      if (text != kTraceHeader) {
        throw TraceError(line, "expected header '" + std::string(kTraceHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (text.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw TraceError(line, "expected 6 fields, got " + std::to_string(fields.size()));
    }
    TraceRecord r;
    r.t = parse_number(fields[0], line, "t_s");
    r.vehicle = std::string(trim(fields[1]));
    if (r.vehicle.empty()) throw TraceError(line, "empty vehicle id");
    r.position.x = parse_number(fields[2], line, "x_m");
    r.position.y = parse_number(fields[3], line, "y_m");
    r.speed = parse_number(fields[4], line, "speed_mps");
    r.heading = parse_number(fields[5], line, "heading_rad");
    if (r.t < 0.0) throw TraceError(line, "negative timestamp");
    if (r.speed < 0.0) throw TraceError(line, "negative speed");
    r.heading = normalize_heading(r.heading);

    auto it = last_t.find(r.vehicle);
    if (it != last_t.end() && r.t <= it->second) {
      throw TraceError(line, "timestamps for vehicle '" + r.vehicle + "' are not increasing");
    }
    last_t[r.vehicle] = r.t;
    out.push_back(std::move(r));
  }

  std::stable_sort(out.begin(), out.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.vehicle < b.vehicle;
  });
  return out;
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open trace file " + file.string());
  return parse_trace(in);
}

TraceSet::TraceSet(const std::vector<TraceRecord>& records) {
  for (const auto& r : records) tracks_[r.vehicle].push_back(r);
  for (auto& [id, rows] : tracks_) {
    std::sort(rows.begin(), rows.end(),
              [](const TraceRecord& a, const TraceRecord& b) { return a.t < b.t; });
  }
}

std::vector<std::string> TraceSet::vehicles() const {
  std::vector<std::string> ids;
  for (const auto& [id, rows] : tracks_) ids.push_back(id);
  return ids;
}

std::optional<KinematicState> TraceSet::state_at(const std::string& vehicle, double t) const {
  const auto it = tracks_.find(vehicle);
  if (it == tracks_.end() || it->second.empty()) return std::nullopt;
  const auto& rows = it->second;
  const auto as_state = [](const TraceRecord& r) {
    return KinematicState{r.position, r.speed, r.heading};
  };
  if (t <= rows.front().t) return as_state(rows.front());
  if (t >= rows.back().t) return as_state(rows.back());

  const auto hi = std::upper_bound(rows.begin(), rows.end(), t,
                                   [](double value, const TraceRecord& r) { return value < r.t; });
  const auto& b = *hi;
  const auto& a = *(hi - 1);
  const double f = (t - a.t) / (b.t - a.t);
  KinematicState s;
  s.position.x = a.position.x + (b.position.x - a.position.x) * f;
  s.position.y = a.position.y + (b.position.y - a.position.y) * f;
  s.speed = a.speed + (b.speed - a.speed) * f;
  s.heading = a.heading;
  return s;
}

std::optional<Position> TraceSet::position_at(const std::string& vehicle, double t) const {
  auto s = state_at(vehicle, t);
  if (!s) return std::nullopt;
  return s->position;
}

}  // namespace cits
