#include <cmath>
#include <complex>
#include <numbers>

#include <benchmark/benchmark.h>

#include "anosov/hitchin.hpp"
#include "anosov/lemma64.hpp"
#include "anosov/multicone.hpp"
#include "anosov/reducible_plane.hpp"
#include "anosov/surface.hpp"

namespace {

using namespace anosov;

constexpr double kPi = std::numbers::pi;

void BM_ProjectClosedForm(benchmark::State& state) {
  const Flag f = fiber_over_interior(PlanePoint::make(2.0, 1.0, 1.0), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(project(f));
}
BENCHMARK(BM_ProjectClosedForm);

void BM_MinimizeBusemannColdStart(benchmark::State& state) {
  const Flag f = fiber_over_interior(PlanePoint::make(2.0, 1.0, 1.0), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_busemann(f, PlanePoint::identity()));
}
BENCHMARK(BM_MinimizeBusemannColdStart);

void BM_CertificateCell(benchmark::State& state) {
  const cplx beta = std::polar(0.7, 0.4);
  double d = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(certificate_margin(beta, d, std::polar(1.0, d)));
    d = d > 5.0 ? -5.0 : d + 0.05;
  }
}
BENCHMARK(BM_CertificateCell);

void BM_CommutatorOracleCell(benchmark::State& state) {
  const cplx beta = std::polar(0.7, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(commutator_fields(beta, 1.3, std::polar(1.0, 0.9)));
}
BENCHMARK(BM_CommutatorOracleCell);

void BM_SweepDefaultGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep(CertGrid{}));
}
BENCHMARK(BM_SweepDefaultGrid)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_ClassifyFlag(benchmark::State& state) {
  const Multicone U = translate(Multicone::model(0.8), 0.5);
  const Flag f = boundary_chart(U, 1.1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify(U, f));
}
BENCHMARK(BM_ClassifyFlag);

void BM_NestEstimate(benchmark::State& state) {
  const Multicone U = Multicone::model(0.8);
  const Multicone V = translate(U, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nest_estimate(U, V));
}
BENCHMARK(BM_NestEstimate)->Unit(benchmark::kMillisecond);

void BM_SolveTorus(benchmark::State& state) {
  const DomainSpec dom = DomainSpec::torus(1.0, 1.0, static_cast<int>(state.range(0)));
  const HiggsDatum t = HiggsDatum::constant(dom, 2.0);
  const ScalarField u0(dom.nx(), dom.ny(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(solve(dom, t, u0));
}
BENCHMARK(BM_SolveTorus)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveDiskMonomial(benchmark::State& state) {
  const DomainSpec dom = DomainSpec::disk(0.7, static_cast<int>(state.range(0)));
  const HiggsDatum t = HiggsDatum::monomial(dom, 1.0, 1);
  const ScalarField u0 = fuchsian_profile(dom);
  for (auto _ : state) benchmark::DoNotOptimize(solve(dom, t, u0));
}
BENCHMARK(BM_SolveDiskMonomial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GapScan(benchmark::State& state) {
  const Representation rep = make_reducible(octagon_fuchsian());
  ScanOptions opt;
  opt.max_len = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gap_scan(rep, opt));
}
BENCHMARK(BM_GapScan)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_PushforwardCheck(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pushforward_check(0.5, 1e-3, 512));
}
BENCHMARK(BM_PushforwardCheck)->Unit(benchmark::kMillisecond);

void BM_FiberSamples(benchmark::State& state) {
  const PlanePoint X = PlanePoint::make(2.0, 1.0, 1.0);
  for (auto _ : state)
    for (int k = 0; k < 256; ++k) benchmark::DoNotOptimize(fiber_over_interior(X, 2 * kPi * k / 256));
}
BENCHMARK(BM_FiberSamples);

}  // namespace

BENCHMARK_MAIN();
