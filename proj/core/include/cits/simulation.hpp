#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cits/control_plane.hpp"
#include "cits/engine.hpp"
#include "cits/fog.hpp"
#include "cits/kpi.hpp"
#include "cits/rat.hpp"
#include "cits/rng.hpp"
#include "cits/scenario.hpp"
#include "cits/topology.hpp"
#include "cits/trace.hpp"

namespace cits {

struct RunResult {
  std::vector<KpiRecord> records;
  NameTable names;
  Summary summary;
  std::vector<CloudBatch> cloud;
  std::uint64_t events = 0;
};

// One scenario instance: world state plus its event queue. Everything is
// owned by the single-threaded event loop.
class Simulation {
 public:
  // Called after every processed event.
  using Observer = std::function<void(const Event&, const Simulation&)>;

  explicit Simulation(const Scenario& scenario);

  // Processes all events with time <= t_end. May be called repeatedly with
  // increasing t_end.
  std::uint64_t run_until(double t_end);

  // Runs to the scenario duration (if not already there) and summarizes.
  // The records move into the result, leaving sink() empty.
  RunResult finish();

  void set_observer(Observer observer) { observer_ = std::move(observer); }

  double clock() const { return queue_.clock(); }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const std::vector<Rsu>& rsus() const { return rsus_; }
  const std::vector<FogArea>& areas() const { return areas_; }
  const std::vector<FogOrchestratorState>& fog_states() const { return fos_; }
  const std::vector<CloudBatch>& cloud_batches() const { return cloud_; }
  const KpiSink& sink() const { return sink_; }
  const NameTable& names() const { return names_; }
  std::optional<std::size_t> vehicle_index(const std::string& id) const;
  // Channel behind one RSU radio (rat is the radio's RAT, dsrc_px included).
  const Channel& channel(std::size_t rsu, RatId rat) const { return channels_[rsu * kRatCount + index_of(rat)]; }
  std::uint64_t deferrals() const { return deferrals_; }
  std::uint64_t events_processed() const { return events_; }

 private:
  struct Held {
    Message message;
    int deferrals = 0;
  };
  struct StreamState {
    StreamDescriptor descriptor;
    std::optional<RatId> reserved;  // RAT holding this stream's reservation
    std::deque<Held> held;          // Enh1 messages waiting for a retry
  };
  struct VehicleState {
    NodeId node = 0;
    StreamDescriptor bsm;
    std::vector<StreamState> streams;
    std::array<RngStream, kRatCount> link_rng;
    std::unordered_map<std::uint64_t, LinkState> links;  // key: endpoint * kRatCount + rat
    Channel sidelink;
  };
  enum class RouteKind : unsigned char { send, drop_coverage, drop_policy, defer };
  struct Route {
    RouteKind kind = RouteKind::drop_coverage;
    RatId rat = RatId::dsrc;
    LinkMode mode = LinkMode::v2i;
    std::optional<std::size_t> rsu;  // empty for sidelink
  };

  void handle(const Event& event);
  void on_mobility(double t);
  void on_bsm(std::size_t v, std::uint64_t k);
  void on_stream(std::size_t v, std::size_t s, std::uint64_t k);
  void on_handover(double t);
  void on_cloud_sync(double t);
  void on_end();

  void admit_initial();
  void readmit(std::size_t v);
  void release_streams(std::size_t v);
  void cancel_held(std::size_t v);

  std::optional<std::size_t> nearest_rsu(std::size_t v, RatId rat) const;
  RatAvailability availability(std::size_t v) const;
  Route route(std::size_t v, StreamState* stream, LayerId layer, double t);
  // Transmits on a decided route and records the outcome. Returns the status.
  MessageStatus send(std::size_t v, Message message, const Route& r, double t,
                     const std::optional<KinematicState>& snapshot);
  void record(std::size_t v, const KpiRecord& record);
  void recompute_density();

  Scenario scenario_;
  EventQueue queue_;
  KpiSink sink_;
  NameTable names_;
  std::optional<TraceSet> trace_;
  std::vector<Vehicle> vehicles_;
  std::vector<VehicleState> state_;
  std::vector<Rsu> rsus_;
  std::vector<NodeId> rsu_nodes_;
  std::vector<FogArea> areas_;
  std::vector<FogOrchestratorState> fos_;
  // Per area, per RSU RAT: RSU indices.
  std::vector<std::array<std::vector<std::size_t>, kRatCount>> area_rsus_;
  std::vector<Channel> channels_;     // rsu * kRatCount + rat
  std::vector<double> dsrc_density_;  // vehicles within DSRC range, per RSU
  std::vector<CloudBatch> cloud_;
  Observer observer_;
  std::uint64_t next_msg_id_ = 1;
  std::uint64_t events_ = 0;
  std::uint64_t deferrals_ = 0;
  std::uint64_t deferred_then_sent_ = 0;
  std::uint64_t escalated_ = 0;
  std::uint64_t handovers_ = 0;
  bool ended_ = false;
};

// Runs a scenario to completion and writes messages.csv / summary.json (per
// formats), cloud.jsonl and effective_config.json into out_dir.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                       OutputFormats formats = {});

std::string cloud_jsonl(const std::vector<CloudBatch>& batches);

// Juxtaposes the summary.json of several runs with per-group ratios against
// the first run. Writes report_file and, when svg is set, pdr.svg and
// goodput.svg next to it.
void report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& report_file,
            bool svg);

}  // namespace cits
