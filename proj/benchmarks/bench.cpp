#include <benchmark/benchmark.h>

#include <random>

#include "badcantor/cantor.hpp"
#include "badcantor/constants.hpp"
#include "badcantor/dangerous.hpp"
#include "badcantor/lattice.hpp"
#include "support.hpp"

namespace bc = badcantor;
using bc::testing::Q;

static void BM_ShortestNonzero(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  bc::FlowMatrix g;
  g.base = bc::ScaleBase::integer(2);
  g.log_diag.assign(d, Q(0));
  g.shear = bc::identity_matrix(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.log_diag[i] = Q(static_cast<long>(rng() % 5) - 2, 2);
    for (std::size_t j = 0; j < i; ++j) g.shear[i][j] = Q(static_cast<long>(rng() % 9) - 4, 3);
  }
  bc::LatticeBasis b{g, "bench"};
  for (auto _ : state) benchmark::DoNotOptimize(bc::shortest_nonzero(b));
}
BENCHMARK(BM_ShortestNonzero)->DenseRange(2, 4);

static void BM_EnumerateLevel(benchmark::State& state) {
  bc::CurveModel curve = bc::testing::parabola();
  bc::RationalInterval I0(Q(-1, 54), Q(1, 54));
  bc::ShiftField shift =
      bc::build_shift({bc::Polynomial::constant(Q(1, 7)), bc::testing::affine(Q(1, 3), Q(1, 11))}, I0.dilate(Q(27)));
  bc::ConstantSheet sheet =
      bc::testing::synthetic_sheet(curve, shift, bc::testing::weights({Q(1, 2), Q(1, 2)}), 4, I0, Q(1, 10));
  const long q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(bc::enumerate_level(q, curve, shift, sheet, I0));
}
BENCHMARK(BM_EnumerateLevel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_RunTo(benchmark::State& state) {
  bc::CurveModel curve = bc::testing::line();
  bc::RationalInterval I0 = bc::select_base_interval(curve, bc::Integer(32), bc::MeasureOracle::lebesgue(), Q(0));
  bc::ShiftField shift = bc::build_shift({bc::Polynomial::constant(Q(1, 7))}, I0.dilate(Q(9)));
  bc::ConstantInputs in;
  in.curve = &curve;
  in.shift = &shift;
  in.weights = bc::testing::weights({Q(1)});
  in.R = bc::ScaleBase::integer(32);
  in.I0 = I0;
  in.xi_depth = 14;
  bc::ConstantSheet sheet = bc::derive_constants(in);
  bc::EngineOptions opt;
  opt.escape_tests = false;
  const long q = state.range(0);
  for (auto _ : state) {
    bc::CantorState st = bc::make_state(curve, shift, sheet, bc::MeasureOracle::lebesgue(), opt);
    bc::run_to(st, q);
    benchmark::DoNotOptimize(st.alive.size());
  }
}
BENCHMARK(BM_RunTo)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
