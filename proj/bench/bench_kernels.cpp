// OpenMP kernels against their serial references, plus whole witness solves.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "gme/kernels.hpp"
#include "gme/witness.hpp"

using namespace gme;
using namespace gme::kernels;

namespace {

// Constraints shaped like the witness rows: a few entries in each of several blocks.
struct SchurCase {
  std::vector<int> sizes;
  std::vector<SparseConstraint> a;
  std::vector<RealMatrix> w;
  BlockIncidence inc;
};

SchurCase make_case(int blocks, int size, int rows) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> idx(0, size - 1);
  SchurCase c;
  c.sizes.assign(static_cast<std::size_t>(blocks), size);
  for (int i = 0; i < rows; ++i) {
    SparseConstraint s;
    for (int b = 0; b < blocks; ++b) {
      BlockPart p{b, {}, {}, {}, {}};
      for (int e = 0; e < 4; ++e) {
        int r = idx(rng), q = idx(rng);
        if (r > q) std::swap(r, q);
        p.row.push_back(r);
        p.col.push_back(q);
        p.value.push_back(g(rng));
      }
      p.support = p.row;
      p.support.insert(p.support.end(), p.col.begin(), p.col.end());
      std::sort(p.support.begin(), p.support.end());
      p.support.erase(std::unique(p.support.begin(), p.support.end()), p.support.end());
      s.parts.push_back(std::move(p));
    }
    c.a.push_back(std::move(s));
  }
  for (int b = 0; b < blocks; ++b) {
    RealMatrix m(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    for (auto& x : m.data()) x = g(rng);
    RealMatrix spd = m * m.transpose();
    c.w.push_back(spd);
  }
  c.inc = BlockIncidence::build(c.a, c.sizes.size());
  return c;
}

RealMatrix make_spd(int n) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  RealMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (auto& x : m.data()) x = g(rng);
  RealMatrix s = m * m.transpose();
  for (int i = 0; i < n; ++i) s(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) += n;
  return s;
}

void BM_SchurParallel(benchmark::State& st) {
  const SchurCase c = make_case(4, static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  RealMatrix m(c.a.size(), c.a.size());
  for (auto _ : st) {
    schur_parallel(c.a, c.inc, c.w, m);
    benchmark::DoNotOptimize(m.data().data());
  }
}

void BM_SchurSerial(benchmark::State& st) {
  const SchurCase c = make_case(4, static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  RealMatrix m(c.a.size(), c.a.size());
  for (auto _ : st) {
    schur_serial(c.a, c.w, m);
    benchmark::DoNotOptimize(m.data().data());
  }
}

void BM_CholeskyParallel(benchmark::State& st) {
  const RealMatrix a = make_spd(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    RealMatrix l = a;
    benchmark::DoNotOptimize(cholesky_parallel(l));
  }
}

void BM_CholeskySerial(benchmark::State& st) {
  const RealMatrix a = make_spd(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    RealMatrix l = a;
    benchmark::DoNotOptimize(cholesky_serial(l));
  }
}

void BM_DetectThreeQubits(benchmark::State& st) {
  const DensityMatrix rho = random_density_hs(8, 3);
  SdpSettings s;
  s.reference_kernels = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(detect_gme(rho, s).value);
  st.SetLabel(s.reference_kernels ? "serial" : "openmp");
}

void BM_DetectFourQubitsReal(benchmark::State& st) {
  const DensityMatrix rho = white_noise_mix(dicke(4, 2), 0.5);
  SdpSettings s;
  s.reference_kernels = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(detect_gme(rho, s).value);
  st.SetLabel(s.reference_kernels ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_SchurParallel)->Args({16, 64})->Args({32, 256})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SchurSerial)->Args({16, 64})->Args({32, 256})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CholeskyParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CholeskySerial)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DetectThreeQubits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectFourQubitsReal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
