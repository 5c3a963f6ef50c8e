#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "hberry/equivariant.hpp"
#include "hberry/models.hpp"
#include "hberry/purestate.hpp"

using namespace hberry;

namespace {

std::shared_ptr<const gcomplex::GComplex> s3(int refinements, const std::vector<std::string>& names) {
  auto base = gcomplex::build_sphere_complex(3, refinements);
  if (names.empty()) return std::make_shared<const gcomplex::GComplex>(base);
  return std::make_shared<const gcomplex::GComplex>(gcomplex::attach_action(base, models::model_group(names, 1)));
}

}  // namespace

static void BM_SphereMesh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gcomplex::build_sphere_complex(3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SphereMesh)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_DDKS(benchmark::State& state) {
  numerics::set_num_threads(1);
  auto c = s3(static_cast<int>(state.range(0)), {});
  for (auto _ : state) {
    auto fam = models::model_family(c, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(mps::ddks(fam, c->fundamental_class()));
  }
}
BENCHMARK(BM_DDKS)->ArgsProduct({{1, 2, 3}, {1, 2}})->Unit(benchmark::kMillisecond);

static void BM_EquivariantData(benchmark::State& state) {
  numerics::set_num_threads(1);
  auto fam = models::model_family(s3(static_cast<int>(state.range(0)), {"T", "C2x", "C2y"}), 1);
  for (auto _ : state) benchmark::DoNotOptimize(equivariant::build_equivariant(fam));
}
BENCHMARK(BM_EquivariantData)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

static void BM_GaugeTransform(benchmark::State& state) {
  auto fam = models::model_family(s3(2, {"T", "C2x", "C2y"}), 1);
  auto eq = equivariant::build_equivariant(fam);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    auto gt = equivariant::random_gauge(fam, fam.mesh().group().order(), rng);
    auto gf = equivariant::gauge_family(fam, gt);
    benchmark::DoNotOptimize(equivariant::gauge_equivariant(gf, eq, gt));
  }
}
BENCHMARK(BM_GaugeTransform)->Unit(benchmark::kMillisecond);

static void BM_Chern(benchmark::State& state) {
  auto base = gcomplex::build_sphere_complex(2, static_cast<int>(state.range(0)));
  auto c = std::make_shared<const gcomplex::GComplex>(base);
  auto dom = gcomplex::standard_domains(*c);
  for (auto _ : state) benchmark::DoNotOptimize(purestate::chern(purestate::spin_field_family(c, 1), dom.at("S2")));
}
BENCHMARK(BM_Chern)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
