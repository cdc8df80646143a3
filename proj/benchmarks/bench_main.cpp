#include <benchmark/benchmark.h>

#include <filesystem>

#include "cits/engine.hpp"
#include "cits/rat.hpp"
#include "cits/rng.hpp"
#include "cits/scenario.hpp"
#include "cits/simulation.hpp"

using namespace cits;

namespace {

void BM_EventQueueChurn(benchmark::State& state) {
  const auto pending = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    EventQueue q;
    RngStream rng(1, "bench");
    for (std::size_t i = 0; i < pending; ++i) q.schedule(rng.uniform(0, 1), BsmTick{});
    // Steady state: every pop schedules one successor.
    for (std::size_t i = 0; i < pending * 4; ++i) {
      const auto e = q.next_event();
      q.schedule(e->time + rng.uniform(0, 1), BsmTick{});
    }
    benchmark::DoNotOptimize(q.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * pending * 4));
}
BENCHMARK(BM_EventQueueChurn)->Arg(1 << 10)->Arg(1 << 16);

void BM_Transmit(benchmark::State& state) {
  const auto rat = static_cast<RatId>(state.range(0));
  const auto profile = profile_of(rat);
  RatModels models;
  Channel channel;
  channel.max_queue_s = 1e9;
  LinkState link;
  RngStream rng(1, "bench");
  Message m;
  m.bytes = 1200;
  TxContext ctx;
  ctx.rx = {40, 0};
  ctx.density = 20;
  std::uint64_t id = 0;
  for (auto _ : state) {
    m.id = ++id;
    ctx.now_s = static_cast<double>(id) * 1e-3;
    m.created_at = ctx.now_s;
    benchmark::DoNotOptimize(transmit(m, profile, models, ctx, link, channel, rng));
  }
  state.SetLabel(std::string(to_string(rat)));
}
BENCHMARK(BM_Transmit)
    ->Arg(static_cast<int>(RatId::dsrc))
    ->Arg(static_cast<int>(RatId::cv2x))
    ->Arg(static_cast<int>(RatId::mmwave));

void BM_DeskScenario(benchmark::State& state) {
  auto s = load_config(std::filesystem::path(CITS_SCENARIO_DIR) / "desk.json");
  s.duration_s = static_cast<double>(state.range(0));
  std::uint64_t events = 0;
  for (auto _ : state) {
    auto res = Simulation(s).finish();
    events += res.events;
    benchmark::DoNotOptimize(res.summary.run.delivered);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_DeskScenario)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
