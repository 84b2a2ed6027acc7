// OpenMP kernels against their serial twins on a Bose-Hubbard chain.
#include <benchmark/benchmark.h>

#include <map>

#include "bosonwb/kernels.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/spectra.hpp"

namespace {

struct Fixture {
  bw::FockSpace space;
  bw::SparseOperator H;
  bw::Vec x;
  explicit Fixture(int L) : space(bw::FockSpace::uniform(L, 5)) {
    H = bw::build_hamiltonian(bw::standard_bose_hubbard(L, 1.0, 2.0), space);
    x = bw::random_unit_vector(space.dim(), 3);
  }
};

const Fixture& fixture(int L) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(L);
  if (it == cache.end()) it = cache.emplace(L, Fixture(L)).first;
  return it->second;
}

void BM_matvec_omp(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  bw::Vec y(f.x.size());
  for (auto _ : st) {
    bw::kernels::csr_matvec(f.H.mat, f.x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(f.H.nnz()));
}

void BM_matvec_serial(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  bw::Vec y(f.x.size());
  for (auto _ : st) {
    bw::kernels::csr_matvec_serial(f.H.mat, f.x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(f.H.nnz()));
}

void BM_occupation_omp(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bw::kernels::occupation_distribution(f.space, f.x, 0));
}

void BM_occupation_serial(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bw::kernels::occupation_distribution_serial(f.space, f.x, 0));
}

void BM_tail_omp(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bw::kernels::tail_sum(f.space, f.x, 1, 3));
}

void BM_tail_serial(benchmark::State& st) {
  const auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bw::kernels::tail_sum_serial(f.space, f.x, 1, 3));
}

}  // namespace

BENCHMARK(BM_matvec_omp)->Arg(4)->Arg(6);
BENCHMARK(BM_matvec_serial)->Arg(4)->Arg(6);
BENCHMARK(BM_occupation_omp)->Arg(4)->Arg(6);
BENCHMARK(BM_occupation_serial)->Arg(4)->Arg(6);
BENCHMARK(BM_tail_omp)->Arg(4)->Arg(6);
BENCHMARK(BM_tail_serial)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
