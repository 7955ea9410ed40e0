#include <benchmark/benchmark.h>

#include <random>

#include "pdirac/bands.hpp"
#include "pdirac/gauge.hpp"
#include "pdirac/verify.hpp"

using namespace pdirac;

namespace {

// Real-valued field with `pairs` random modes in [-2, 2]^3.
FourierField random_field(const Lattice& L, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(-2, 2);
  std::normal_distribution<double> g(0.0, 0.05);
  FourierField A = FourierField::vector(L);
  for (int i = 0; i < pairs; ++i) {
    const IntVec N{c(rng), c(rng), c(rng)};
    if (is_zero(N)) continue;
    CMatrix v(3, 1);
    for (int j = 0; j < 3; ++j) v(j) = cplx(g(rng), g(rng));
    A.set(N, v);
    A.set(negated(N), CMatrix(v.conjugate()));
  }
  return A;
}

FiberPoint face_point(double kappa) {
  return {(RVector(3) << kPi, 0.3, -0.2).finished(), RVector::Unit(3, 0), kappa};
}

}  // namespace

static void BM_Assemble(benchmark::State& state) {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  PotentialSet pot = PotentialSet::zero(L, rep);
  pot.A = random_field(L, 8, 1);
  const ModeSet modes = ModeSet::within_cutoff(L, state.range(0) * kPi);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(L, rep, modes, face_point(kPi), pot));
  state.counters["dim"] = static_cast<double>(modes.size() * rep.size());
}
BENCHMARK(BM_Assemble)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_SigmaMin(benchmark::State& state) {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  PotentialSet pot = PotentialSet::zero(L, rep);
  pot.A = random_field(L, 8, 2);
  const ModeSet modes = ModeSet::within_cutoff(L, state.range(0) * kPi);
  const TruncatedDiracOperator op = assemble(L, rep, modes, face_point(2 * kPi), pot);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_min(op));
  state.counters["dim"] = static_cast<double>(op.dimension());
}
BENCHMARK(BM_SigmaMin)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_BandSweep(benchmark::State& state) {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  PotentialSet pot = PotentialSet::zero(L, rep);
  pot.A = random_field(L, 8, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        band_sweep(L, rep, pot, RVector::Zero(3), RVector::Unit(3, 0), 0.0, 1.0, 20, 3 * kPi));
}
BENCHMARK(BM_BandSweep)->Unit(benchmark::kMillisecond);

static void BM_ConditionValue(benchmark::State& state) {
  const Lattice L = Lattice::cubic(3);
  const FourierField A = random_field(L, 20, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(condition_value(A, {1, 0, 0}, MeasureSpec::plateau(0.25, 0.5),
                                             static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ConditionValue)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_FindGamma(benchmark::State& state) {
  const Lattice L = Lattice::cubic(3);
  std::vector<SphereMeasure::Atom> atoms;
  for (int j = 0; j < 3; ++j) atoms.push_back({RVector::Unit(3, j), 1.0});
  const SphereMeasure mu(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(find_gamma(L, mu, 0.05, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_FindGamma)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_KernelConstant(benchmark::State& state) {
  KernelQuadrature q;
  q.cross_step = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(bessel_kernel_constant(EtaSpec{}, q));
}
BENCHMARK(BM_KernelConstant)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
