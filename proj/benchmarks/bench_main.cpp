#include <benchmark/benchmark.h>

#include "jrs/pairs.hpp"

using namespace jrs;

static void BM_BesselK(benchmark::State& st) {
  const Complex nu(0.3, 4.0);
  double x = 0.5;
  for (auto _ : st) {
    benchmark::DoNotOptimize(bessel_K(nu, x));
    x = x > 30.0 ? 0.5 : x + 0.37;
  }
}
BENCHMARK(BM_BesselK);

static void BM_Eisenstein(benchmark::State& st) {
  const EisensteinEvaluator e(Complex(1.7, 3.0), 1e-13);
  const ModularPoint tau(0.21, 0.9);
  for (auto _ : st) benchmark::DoNotOptimize(e(tau));
}
BENCHMARK(BM_Eisenstein);

static void BM_ThetaEval(benchmark::State& st) {
  const NumericComponents h(theta_decompose(*named_pair("phi10", 400).phi));
  const ModularPoint tau(0.37, 0.12);  // far from the cusp: Weil transport
  for (auto _ : st) benchmark::DoNotOptimize(h_eval(h, tau));
}
BENCHMARK(BM_ThetaEval);

static void BM_FormBuild(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(cusp_forms_index1(st.range(0)));
}
BENCHMARK(BM_FormBuild)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_UnfoldedProduct(benchmark::State& st) {
  const JacobiFormTable& phi = *named_pair("phi10", 400).phi;
  petersson_jacobi_unfolded(phi, phi);  // one-time validation outside the loop
  for (auto _ : st) benchmark::DoNotOptimize(petersson_jacobi_unfolded(phi, phi));
}
BENCHMARK(BM_UnfoldedProduct)->Unit(benchmark::kMillisecond);

static void BM_IntegralRoute(benchmark::State& st) {
  const RankinIntegrator engine(named_pair("phi10", 4000).rankin);
  for (auto _ : st) benchmark::DoNotOptimize(engine.evaluate(Complex(9.2, 1.1)));
}
BENCHMARK(BM_IntegralRoute)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
