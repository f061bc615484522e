#include <benchmark/benchmark.h>

#include "critwave/ode_blowup.hpp"
#include "critwave/radon.hpp"
#include "critwave/sharp_transform.hpp"
#include "critwave/wave_solver.hpp"

namespace {

critwave::SimulationConfig config_for(double h) {
  critwave::SimulationConfig c;
  c.n = 4;
  c.p = 2.0;
  c.h = h;
  c.t_max = 8.0;
  c.initial_data.amplitude = 5.0;
  return c;
}

void BM_SolverStep(benchmark::State& st) {
  const auto c = config_for(1.0 / static_cast<double>(st.range(0)));
  critwave::RadialState s = critwave::make_initial_state(c);
  for (auto _ : st) {
    s = critwave::step(s, c);
    benchmark::DoNotOptimize(s.u.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_SolverStep)->Arg(100)->Arg(400);

void BM_RadonSection(benchmark::State& st) {
  auto c = config_for(1.0 / static_cast<double>(st.range(0)));
  c.t_max = 2.0;
  const auto sim = critwave::simulate(c, {}, {2.0});
  const auto& s = sim.snapshots.at(0);
  for (auto _ : st) {
    auto sec = critwave::radon_section(s, critwave::RadonKind::of_u);
    benchmark::DoNotOptimize(sec.values.data());
  }
}
BENCHMARK(BM_RadonSection)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MaximalFunction(benchmark::State& st) {
  const auto f = critwave::random_nonneg_field(1, 4, 100.0, 1.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto m = critwave::maximal_function_all(f);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_MaximalFunction)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_TransformT(benchmark::State& st) {
  const auto f = critwave::random_nonneg_field(1, 4, 100.0, 1.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto t = critwave::transform_T_all(f);
    benchmark::DoNotOptimize(t.data());
  }
}
BENCHMARK(BM_TransformT)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_ComparisonOde(benchmark::State& st) {
  critwave::OdeProblem pr;
  pr.K1 = 2.0 / (M_PI * M_PI);
  pr.K0 = 12.0;
  pr.T0 = 0.0;
  const auto integ = st.range(0) == 0 ? critwave::OdeIntegrator::rk4_step_doubling
                                      : critwave::OdeIntegrator::dopri5;
  for (auto _ : st) benchmark::DoNotOptimize(critwave::integrate_comparison(pr, integ));
}
BENCHMARK(BM_ComparisonOde)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
