// Schmidt decompositions, entanglement entropy, MPS truncation and the entanglement reports.
#pragma once

#include <cstdint>
#include <vector>

#include "bosonwb/fock.hpp"
#include "bosonwb/report.hpp"
#include "bosonwb/spectra.hpp"

namespace bw {

constexpr std::size_t kDefaultByteBudget = std::size_t{4} << 30;
constexpr double kSchmidtFloor = 1e-12;

struct SchmidtSpectrum {
  int cut = 0;  // number of sites on the left
  Eigen::VectorXd coefficients;  // descending
  int rank = 0;
  double floor = kSchmidtFloor;
  // Left and right Schmidt vectors as columns, filled on request.
  CMat left_vectors;
  CMat right_vectors;
};

// Schmidt values of a vector laid out as (left fastest) x right.
SchmidtSpectrum schmidt_split(const Vec& state, std::size_t left, std::size_t right, bool vectors = false,
                              std::size_t byte_budget = kDefaultByteBudget);
// Sites [0, cut) against [cut, L). Unnormalized input is normalized.
SchmidtSpectrum schmidt_decompose(const Vec& state, const FockSpace& space, int cut, bool vectors = false,
                                  std::size_t byte_budget = kDefaultByteBudget);

double entropy(const SchmidtSpectrum& s);       // nats
double entropy_bits(const SchmidtSpectrum& s);  // base 2
// sum_{m > D} lambda_m^2
double schmidt_tail(const SchmidtSpectrum& s, int D);

// Reduced density matrix of one site.
CMat reduced_density(const Vec& state, const FockSpace& space, int site);
// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm(const CMat& a);

struct MPSApprox {
  int D = 1;
  std::vector<double> delta;        // Schmidt tail of the input at cut x = 1 .. L-1, index x - 1
  std::vector<double> discarded;    // weight dropped by the sweep at each cut
  double delta_sum = 0.0;
  double bound = 0.0;               // 2 sum delta
  Vec reconstruction;
  double error = 0.0;               // ||psi - M||
  std::vector<double> reduced_error;  // ||rho_x(psi) - rho_x(M)||_1 per site
  double global_trace_error = 0.0;    // || |psi><psi| - |M><M| ||_1
  CheckReport report;
};

MPSApprox mps_compress(const Vec& state, const FockSpace& space, int D,
                       std::size_t byte_budget = kDefaultByteBudget);

// Tail of the spectrum at rank r vs ||psi - psi'||^2 for random rank-r psi', plus equality at the SVD truncation.
CheckReport eckart_young_check(const Vec& state, std::size_t left, std::size_t right, int rank, int trials,
                               std::uint64_t seed = 5);

struct AreaLawParams {
  double alpha_bar = 2.0;
  double chi = 2.0;
  double upsilon = 0.0;
  double C0 = 1.0;
};
AreaLawParams area_law_params_bh(int k, double alpha_bar = 2.0);
// {a, b, c, upsilon} = {k, k/(8 e C), 4 e^k, k^2/4}; chi = a k / 2
AreaLawParams area_law_params_phi4(int k, double alpha_bar = 2.0);
// C0 gap^{-(1+2/abar)(upsilon+1)} log(1/gap)^{4 + 3/abar + chi (1 + 2/abar)}
double area_law_bound(const AreaLawParams& p, double gap);

CheckReport area_law_report(const SpectralData& sd, const FockSpace& space, int cut, const AreaLawParams& p);

struct SweepRow {
  double parameter = 0.0;
  double gap = 0.0;
  double entropy = 0.0;
  double bound = 0.0;
};
// Entropy against gap while J/U varies on a Bose-Hubbard chain; reported, not asserted.
std::vector<SweepRow> bh_entropy_sweep(int L, int cutoff, double U, const std::vector<double>& J, int cut,
                                       const AreaLawParams& p);

}  // namespace bw
