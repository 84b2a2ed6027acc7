// Data-parallel kernels. Each OpenMP kernel has a serial twin used as the
// reference in tests and as the baseline in the benchmark.
#pragma once

#include <vector>

#include "bosonwb/fock.hpp"

namespace bw::kernels {

void csr_matvec(const SpMat& a, const cplx* x, cplx* y);
void csr_matvec_serial(const SpMat& a, const cplx* x, cplx* y);

// p[n] = sum of |psi_i|^2 over basis states with occupation n at `site`.
std::vector<double> occupation_distribution(const FockSpace& space, const Vec& psi, int site);
std::vector<double> occupation_distribution_serial(const FockSpace& space, const Vec& psi, int site);

// sum |psi_i|^2 over states whose occupation at `site` is >= n.
double tail_sum(const FockSpace& space, const Vec& psi, int site, int n);
double tail_sum_serial(const FockSpace& space, const Vec& psi, int site, int n);

int max_threads();
void set_threads(int n);

}  // namespace bw::kernels
