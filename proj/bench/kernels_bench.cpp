// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "congsub/approx.hpp"
#include "congsub/congcount.hpp"
#include "congsub/nori.hpp"
#include "congsub/volumes.hpp"

using namespace congsub;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_CountAffine(benchmark::State& state) {
  IntPolynomial f = IntPolynomial::parse("x0^3 + 2*x0*x1 - x1^2 + 1");
  for (auto _ : state) benchmark::DoNotOptimize(count_affine(f, 7, 3, {}, mode(state)));
}
BENCHMARK(BM_CountAffine)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OptimalitySearch(benchmark::State& state) {
  Modulus mod = Modulus::make(3, 7);
  LieLattice M = worst_case_subalgebra(3, 4, 7, Vec3(mod, 0, 2, 0));
  for (auto _ : state) benchmark::DoNotOptimize(optimality_search(M, 4, {}, mode(state)));
}
BENCHMARK(BM_OptimalitySearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PhiBrute(benchmark::State& state) {
  Modulus mod = Modulus::make(5, 2);
  auto K = membership({SubgroupKind::Gamma0, std::nullopt}, mod);
  Mat2 x(mod, 1, 1, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(phi_brute(K, x, mod, {}, mode(state)));
}
BENCHMARK(BM_PhiBrute)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OrbitalVolume(benchmark::State& state) {
  Modulus mod = Modulus::make(3, 3);
  auto K = membership({SubgroupKind::Gamma0, std::nullopt}, mod);
  for (auto _ : state) benchmark::DoNotOptimize(unipotent_orbital_volume(K, mod, {}, mode(state)));
}
BENCHMARK(BM_OrbitalVolume)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CountOnSl2(benchmark::State& state) {
  IntPolynomial f = IntPolynomial::parse("a^2*b + c*d - 3", 4);
  for (auto _ : state) benchmark::DoNotOptimize(count_mod_p_on_sl2(f, 31, mode(state)));
}
BENCHMARK(BM_CountOnSl2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CDelta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(c_delta({2, 1, 1, 1}, DeltaKind::Gamma0, 343, mode(state)));
}
BENCHMARK(BM_CDelta)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NoriRoundTrip(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip_check_fp(7, {}, mode(state)));
}
BENCHMARK(BM_NoriRoundTrip)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
