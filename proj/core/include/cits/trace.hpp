#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cits/topology.hpp"

namespace cits {

inline constexpr std::string_view kTraceHeader = "t_s,vehicle,x_m,y_m,speed_mps,heading_rad";

struct TraceRecord {
  double t = 0.0;
  std::string vehicle;
  Position position;
  double speed = 0.0;
  double heading = 0.0;
};

struct KinematicState {
  Position position;
  double speed = 0.0;
  double heading = 0.0;
};

// Parses the trace CSV. Rows come back sorted by (time, vehicle id).
// Throws TraceError naming the line for malformed rows, negative speeds and
// per-vehicle timestamps that do not strictly increase.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> load_trace(const std::filesystem::path& file);

// Per-vehicle lookup with linear interpolation between bracketing rows.
// Outside the covered interval the nearest row is held.
class TraceSet {
 public:
  TraceSet() = default;
  explicit TraceSet(const std::vector<TraceRecord>& records);

  bool has(const std::string& vehicle) const { return tracks_.count(vehicle) != 0; }
  std::vector<std::string> vehicles() const;
  std::optional<KinematicState> state_at(const std::string& vehicle, double t) const;
  std::optional<Position> position_at(const std::string& vehicle, double t) const;

 private:
  std::map<std::string, std::vector<TraceRecord>> tracks_;
};

}  // namespace cits
