#include <vector>

#include <benchmark/benchmark.h>

#include "hwbarrier/fd_reference.hpp"
#include "hwbarrier/git_pricer.hpp"
#include "hwbarrier/hp_pricer.hpp"

namespace {

const hwb::HullWhiteModel kModel = hwb::table1_model();
const std::vector<double> kStrikes{0.06, 0.08, 0.1, 0.15, 0.2, 0.3};
const std::vector<double> kMaturities{1.0 / 12.0, 0.3, 0.5, 1.0};

void BM_HpSurface(benchmark::State& state) {
  const hwb::PricingOptions opts{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    for (double T : kMaturities) {
      const hwb::HeatPotentialSolver s(kModel, hwb::kTable1BarrierLevel, T, opts);
      benchmark::DoNotOptimize(s.price(kStrikes));
    }
  }
}
BENCHMARK(BM_HpSurface)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_GitSurface(benchmark::State& state) {
  const hwb::PricingOptions opts{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    for (double T : kMaturities) {
      const hwb::GradientSolver s(kModel, hwb::kTable1BarrierLevel, T, opts);
      benchmark::DoNotOptimize(s.price(kStrikes));
    }
  }
}
BENCHMARK(BM_GitSurface)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FdSurface(benchmark::State& state) {
  hwb::FdOptions opts;
  opts.r_nodes = opts.t_steps = static_cast<std::size_t>(state.range(0));
  const auto contract = hwb::FdContract::down_and_out(hwb::kTable1BarrierLevel);
  for (auto _ : state) {
    for (double T : kMaturities)
      for (double K : kStrikes) benchmark::DoNotOptimize(hwb::price_fd(kModel, contract, T, K, opts));
  }
}
BENCHMARK(BM_FdSurface)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_HpSingle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(hwb::price_hp(kModel, hwb::kTable1BarrierLevel, 1.0, 0.3));
}
BENCHMARK(BM_HpSingle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
