#include "bosonwb/kernels.hpp"

#include <omp.h>

namespace bw::kernels {

void csr_matvec(const SpMat& a, const cplx* x, cplx* y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const auto* val = a.valuePtr();
#pragma omp parallel for schedule(static) if (rows > 4096)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * x[inner[k]];
    y[r] = acc;
  }
}

void csr_matvec_serial(const SpMat& a, const cplx* x, cplx* y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const auto* val = a.valuePtr();
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * x[inner[k]];
    y[r] = acc;
  }
}

std::vector<double> occupation_distribution(const FockSpace& space, const Vec& psi, int site) {
  const int nmax = space.cutoff(site);
  std::vector<double> p(nmax + 1, 0.0);
  const auto d = static_cast<std::ptrdiff_t>(space.dim());
#pragma omp parallel if (d > 4096)
  {
    std::vector<double> local(nmax + 1, 0.0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < d; ++i) local[space.occupation(i, site)] += std::norm(psi[i]);
#pragma omp critical
    for (int n = 0; n <= nmax; ++n) p[n] += local[n];
  }
  return p;
}

std::vector<double> occupation_distribution_serial(const FockSpace& space, const Vec& psi, int site) {
  std::vector<double> p(space.cutoff(site) + 1, 0.0);
  for (std::size_t i = 0; i < space.dim(); ++i) p[space.occupation(i, site)] += std::norm(psi[i]);
  return p;
}

double tail_sum(const FockSpace& space, const Vec& psi, int site, int n) {
  const auto d = static_cast<std::ptrdiff_t>(space.dim());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static) if (d > 4096)
  for (std::ptrdiff_t i = 0; i < d; ++i)
    if (space.occupation(i, site) >= n) s += std::norm(psi[i]);
  return s;
}

double tail_sum_serial(const FockSpace& space, const Vec& psi, int site, int n) {
  double s = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i)
    if (space.occupation(i, site) >= n) s += std::norm(psi[i]);
  return s;
}

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace bw::kernels
