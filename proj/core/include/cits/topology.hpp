#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cits/rat_id.hpp"

namespace cits {

struct RatProfile;

// Planar city frame, meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);
double distance_sq(const Position& a, const Position& b);

// Wraps an angle into [0, 2*pi).
double normalize_heading(double radians);

// Polyline to follow at constant speed. next is the index of the waypoint
// being driven towards; a finished non-looping route parks the vehicle on its
// last waypoint.
struct Route {
  std::vector<Position> waypoints;
  bool loop = false;
  std::size_t next = 0;
};

struct Vehicle {
  std::string id;
  Position position;
  double speed = 0.0;    // m/s
  double heading = 0.0;  // radians, [0, 2*pi)
  std::size_t fog_area = 0;
  Route route;
  std::optional<std::size_t> trace;  // index into a TraceSet when trace-driven
};

struct Rsu {
  std::string id;
  RatId rat = RatId::dsrc;
  Position position;
  std::size_t fog_area = 0;
};

struct FogArea {
  std::string id;
  Position center;
  std::vector<std::string> rsu_ids;
  double cloud_latency_ms = 50.0;
};

// Moves the vehicle speed*dt along its route, or along its heading when it
// has no route. dt == 0 is the identity; dt < 0 throws.
Vehicle advance_vehicle(Vehicle vehicle, double dt);

// Index of the area whose center is nearest; equal distances resolve to the
// lexicographically smallest id. areas must be non-empty.
std::size_t assign_fog_area(const Position& position, std::span<const FogArea> areas);

bool in_range(const Position& tx, const Position& rx, const RatProfile& profile);

}  // namespace cits
