#include "cits/topology.hpp"

#include <cmath>
#include <numbers>

#include "cits/error.hpp"
#include "cits/rat.hpp"

namespace cits {

double distance_sq(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const Position& a, const Position& b) { return std::sqrt(distance_sq(a, b)); }

double normalize_heading(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double h = std::fmod(radians, kTwoPi);
  if (h < 0.0) h += kTwoPi;
  if (h >= kTwoPi) h = 0.0;
  return h;
}

namespace {

double heading_towards(const Position& from, const Position& to, double fallback) {
  if (from == to) return fallback;
  return normalize_heading(std::atan2(to.y - from.y, to.x - from.x));
}

double loop_length(const Route& route) {
  double total = 0.0;
  const auto& wp = route.waypoints;
  for (std::size_t i = 0; i < wp.size(); ++i) {
    total += distance(wp[i], wp[(i + 1) % wp.size()]);
  }
  return total;
}

}  // namespace

Vehicle advance_vehicle(Vehicle v, double dt) {
  if (dt < 0.0 || !std::isfinite(dt)) throw Error("advance_vehicle: dt must be >= 0");
  if (dt == 0.0 || v.speed == 0.0) return v;

  auto& route = v.route;
  if (route.waypoints.empty()) {
    v.position.x += v.speed * dt * std::cos(v.heading);
    v.position.y += v.speed * dt * std::sin(v.heading);
    return v;
  }

  double remaining = v.speed * dt;
  if (route.loop) {
    // Skip whole laps so long steps stay O(waypoints).
    const double lap = loop_length(route);
    if (lap == 0.0) return v;
    if (remaining > lap) remaining = std::fmod(remaining, lap) + lap;
  }
  while (remaining > 0.0 && route.next < route.waypoints.size()) {
    const Position target = route.waypoints[route.next];
    const double d = distance(v.position, target);
    if (d <= remaining) {
      v.position = target;
      remaining -= d;
      ++route.next;
      if (route.next == route.waypoints.size() && route.loop) route.next = 0;
      if (route.next < route.waypoints.size()) {
        v.heading = heading_towards(v.position, route.waypoints[route.next], v.heading);
      }
    } else {
      const double f = remaining / d;
      v.heading = heading_towards(v.position, target, v.heading);
      v.position.x += (target.x - v.position.x) * f;
      v.position.y += (target.y - v.position.y) * f;
      remaining = 0.0;
    }
  }
  return v;
}

std::size_t assign_fog_area(const Position& position, std::span<const FogArea> areas) {
  if (areas.empty()) throw Error("assign_fog_area: no fog areas defined");
  std::size_t best = 0;
  double best_d = distance_sq(position, areas[0].center);
  for (std::size_t i = 1; i < areas.size(); ++i) {
    const double d = distance_sq(position, areas[i].center);
    if (d < best_d || (d == best_d && areas[i].id < areas[best].id)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

bool in_range(const Position& tx, const Position& rx, const RatProfile& profile) {
  return distance(tx, rx) <= profile.range_m;
}

}  // namespace cits
