#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string_view>
#include <variant>
#include <vector>

namespace cits {

// Event payloads. Periodic payloads carry their tick index k; the tick time is
// always k * period so long runs accumulate no drift.
struct MobilityStep {
  std::uint64_t k = 0;
};
struct StreamTick {
  std::uint32_t vehicle = 0;
  std::uint32_t stream = 0;
  std::uint64_t k = 0;
};
struct BsmTick {
  std::uint32_t vehicle = 0;
  std::uint64_t k = 0;
};
// Delivery of a BSM at its receiving RSU. Carries the snapshot the BSM encoded.
struct TxComplete {
  std::uint64_t msg_id = 0;
  std::uint32_t vehicle = 0;
  std::uint32_t rsu = 0;
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  double heading = 0.0;
};
struct LinkEstablished {
  std::uint64_t link = 0;
};
struct HandoverCheck {
  std::uint64_t k = 0;
};
struct CloudSync {
  std::uint64_t k = 0;
};
struct SimEnd {};

using EventPayload = std::variant<MobilityStep, StreamTick, BsmTick, TxComplete,
                                  LinkEstablished, HandoverCheck, CloudSync, SimEnd>;

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventPayload payload;
};

std::string_view kind_name(const EventPayload& payload);

// Min-queue on (time, seq) that owns the simulated clock.
class EventQueue {
 public:
  double clock() const { return clock_; }
  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  std::uint64_t scheduled() const { return next_seq_; }

  // Throws CausalityError when time is before the clock or not finite.
  std::uint64_t schedule(double time, EventPayload payload);

  // Pops the minimum (time, seq) event and advances the clock to its time.
  std::optional<Event> next_event();

  // Time of the next event without removing it.
  std::optional<double> peek_time() const;

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  double clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
};

using EventHandler = std::function<void(const Event&)>;

// Processes every event with time <= t_end in (time, seq) order. Handler
// exceptions are rethrown as EventError with the event context prepended.
// Returns the number of events processed.
std::uint64_t run_until(EventQueue& queue, double t_end, const EventHandler& handler);

}  // namespace cits
