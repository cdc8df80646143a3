#include "cits/engine.hpp"

#include <cmath>
#include <sstream>

#include "cits/error.hpp"

namespace cits {

namespace {

struct KindNames {
  std::string_view operator()(const MobilityStep&) const { return "mobility-step"; }
  std::string_view operator()(const StreamTick&) const { return "stream-tick"; }
  std::string_view operator()(const BsmTick&) const { return "bsm-tick"; }
  std::string_view operator()(const TxComplete&) const { return "tx-complete"; }
  std::string_view operator()(const LinkEstablished&) const { return "link-established"; }
  std::string_view operator()(const HandoverCheck&) const { return "handover-check"; }
  std::string_view operator()(const CloudSync&) const { return "cloud-sync"; }
  std::string_view operator()(const SimEnd&) const { return "sim-end"; }
};

}  // namespace

std::string_view kind_name(const EventPayload& payload) {
  return std::visit(KindNames{}, payload);
}

std::uint64_t EventQueue::schedule(double time, EventPayload payload) {
  if (!std::isfinite(time)) {
    throw CausalityError("event time is not finite");
  }
  if (time < clock_) {
    std::ostringstream os;
    os.precision(17);
    os << "event at t=" << time << " scheduled before clock t=" << clock_;
    throw CausalityError(os.str());
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push(Event{time, seq, std::move(payload)});
  return seq;
}

std::optional<Event> EventQueue::next_event() {
  if (heap_.empty()) return std::nullopt;
  Event ev = heap_.top();
  heap_.pop();
  clock_ = ev.time;
  return ev;
}

std::optional<double> EventQueue::peek_time() const {
  if (heap_.empty()) return std::nullopt;
  return heap_.top().time;
}

std::uint64_t run_until(EventQueue& queue, double t_end, const EventHandler& handler) {
  std::uint64_t processed = 0;
  while (true) {
    const auto t = queue.peek_time();
    if (!t || *t > t_end) break;
    const Event ev = *queue.next_event();
    try {
      handler(ev);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os.precision(17);
      os << kind_name(ev.payload) << " event (t=" << ev.time << ", seq=" << ev.seq
         << "): " << e.what();
      throw EventError(os.str());
    }
    ++processed;
  }
  return processed;
}

}  // namespace cits
