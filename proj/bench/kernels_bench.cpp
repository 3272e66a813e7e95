// Serial reference kernels against their OpenMP versions. The grid side is
// the benchmark argument.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rateind/elliptic.hpp"
#include "rateind/kernels.hpp"

namespace k = rateind::kernels;

namespace {

struct Data {
  int n;
  std::vector<double> mats, u, v, lu, lv, f, anchor, out;
  rateind::EnergySpec energy = rateind::EnergySpec::double_well(0.05);
  rateind::DissipationSpec diss = rateind::DissipationSpec::euclidean(1.0);

  explicit Data(int side) : n(side) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const std::size_t nodes = static_cast<std::size_t>(n) * n;
    for (auto* vec : {&u, &v, &lu, &lv, &f, &anchor}) {
      vec->resize(nodes);
      for (auto& x : *vec) x = d(rng);
    }
    out.resize(nodes);
    // Time-modulated coefficients give one matrix per cell.
    const auto a = rateind::CoeffField::time_modulated(1, {2.0, 0.3, 0.3, 1.0}, 0.4, 3.0);
    const rateind::DiscreteOperator op(a, rateind::Grid(1, 1, n, n), 0.3);
    for (int cj = 0; cj <= n; ++cj) {
      for (int ci = 0; ci <= n; ++ci) {
        const auto m = op.cell_matrix(ci, cj);
        mats.insert(mats.end(), m.begin(), m.end());
      }
    }
  }
  k::CellOperator op() const {
    const double h = 1.0 / (n + 1);
    return {n, n, 1, h, h, false, mats};
  }
};

template <bool Parallel>
void BM_ApplyOperator(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::apply_operator(d.op(), d.u, d.out);
    } else {
      k::serial::apply_operator(d.op(), d.u, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * d.n * d.n);
}

template <bool Parallel>
void BM_Bilinear(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const double b = Parallel ? k::omp::bilinear(d.op(), d.u, d.v) : k::serial::bilinear(d.op(), d.u, d.v);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations() * d.n * d.n);
}

template <bool Parallel>
void BM_ProxSweep(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  const k::ProxSweep in{&d.energy, &d.diss, 1, 0.01, d.u, d.lu, d.f, d.anchor};
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::prox_sweep(in, d.out);
    } else {
      k::serial::prox_sweep(in, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * d.n * d.n);
}

template <bool Parallel>
void BM_FunctionalDelta(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  const k::FunctionalDelta in{&d.energy, &d.diss, 1, d.u, d.v, d.lu, d.lv, d.f, d.anchor};
  for (auto _ : state) {
    const double s = Parallel ? k::omp::functional_delta(in, d.n) : k::serial::functional_delta(in, d.n);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * d.n * d.n);
}

template <bool Parallel>
void BM_Oscillation(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  std::vector<int> anchors;
  for (int a = 0; a < d.n * d.n; a += 3) anchors.push_back(a);
  const double h = 1.0 / (d.n + 1);
  const k::OscillationInput in{d.n, d.n, 1, h, h, 8 * h, 1, d.u, anchors};
  for (auto _ : state) {
    const double s = Parallel ? k::omp::oscillation_sup(in) : k::serial::oscillation_sup(in);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK_TEMPLATE(BM_ApplyOperator, false)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_ApplyOperator, true)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_Bilinear, false)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_Bilinear, true)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_ProxSweep, false)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_ProxSweep, true)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_FunctionalDelta, false)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_FunctionalDelta, true)->Arg(63)->Arg(255);
BENCHMARK_TEMPLATE(BM_Oscillation, false)->Arg(63);
BENCHMARK_TEMPLATE(BM_Oscillation, true)->Arg(63);

BENCHMARK_MAIN();
