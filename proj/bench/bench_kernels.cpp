// Serial reference vs OpenMP for each data-parallel kernel.
// Argument: grid side n (n x n samples). OMP_NUM_THREADS sets the team size.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

#include "relwig/free_particle.hpp"
#include "relwig/kernels.hpp"

using namespace relwig;
namespace k = relwig::kernels;

namespace {

std::vector<cplx> random_values(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

Eigen::MatrixXcd random_coeffs(std::size_t n) {
  const auto r = random_values(n * n, 11);
  Eigen::MatrixXcd c(n, n);
  for (std::size_t i = 0; i < n * n; ++i) c(i / n, i % n) = r[i];
  return c;
}

void label(benchmark::State& state, bool parallel) {
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

template <bool Parallel>
void BM_synthesize(benchmark::State& state) {
  const auto g = PhaseGrid::square(6.0, static_cast<std::size_t>(state.range(0)));
  const auto c = random_coeffs(8);
  std::vector<cplx> out(g.size());
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::synthesize(g, c, out.data());
    else k::serial::synthesize(g, c, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  label(state, Parallel);
}

template <bool Parallel>
void BM_project(benchmark::State& state) {
  const auto g = PhaseGrid::square(6.0, static_cast<std::size_t>(state.range(0)));
  const auto f = random_values(g.size(), 5);
  for (auto _ : state) {
    auto a = Parallel ? k::omp::project(g, f.data(), 8) : k::serial::project(g, f.data(), 8);
    benchmark::DoNotOptimize(a.data());
  }
  label(state, Parallel);
}

template <bool Parallel>
void BM_star_accumulate(benchmark::State& state) {
  const auto g = PhaseGrid::square(8.0, static_cast<std::size_t>(state.range(0)));
  const auto geo = k::StarGeometry::make(g, 1.0, 2);
  const auto sa = random_values(g.size(), 7);
  const auto sb = random_values(g.size(), 8);
  std::vector<cplx> out(geo.nq * geo.m);
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::star_accumulate(geo, {sa.data(), nullptr}, {sb.data(), nullptr}, out.data());
    else k::serial::star_accumulate(geo, {sa.data(), nullptr}, {sb.data(), nullptr}, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  label(state, Parallel);
}

template <bool Parallel>
void BM_rotator_symbol_radii(benchmark::State& state) {
  std::vector<double> r2(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < r2.size(); ++i) r2[i] = 25.0 * static_cast<double>(i) / static_cast<double>(r2.size());
  const SeriesControl ctl;
  for (auto _ : state) {
    auto v = Parallel ? k::omp::rotator_symbol_radii(0.8, r2, Acceleration::Euler, ctl)
                      : k::serial::rotator_symbol_radii(0.8, r2, Acceleration::Euler, ctl);
    benchmark::DoNotOptimize(v.data());
  }
  label(state, Parallel);
}

template <bool Parallel>
void BM_free_wigner(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = PhaseGrid::make(-40, 40, -1, 1, n, n, UnitsTag::FreeParticle);
  const auto psi = gaussian_momentum_state(g, 8.0);
  std::vector<cplx> out(g.size());
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::free_wigner(g, psi, WignerKernel::Epsilon, out.data());
    else k::serial::free_wigner(g, psi, WignerKernel::Epsilon, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  label(state, Parallel);
}

}  // namespace

BENCHMARK(BM_synthesize<false>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize<true>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project<false>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project<true>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_star_accumulate<false>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_star_accumulate<true>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rotator_symbol_radii<false>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rotator_symbol_radii<true>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_free_wigner<false>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_free_wigner<true>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
