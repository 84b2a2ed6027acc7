// Declarative model specifications, Hamiltonian assembly and coupling constants.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bosonwb/fock.hpp"
#include "bosonwb/poly.hpp"

namespace bw {

enum class OpKind { B, Bdag, N, Phi, Pi, NPow };

struct Factor {
  int site = 0;
  OpKind kind = OpKind::N;
  int power = 1;  // repeat count; for NPow the exponent of n
};

// H0 holds sign-indefinite terms, Vplus the positive n-polynomial sector.
enum class Sector { H0, Vplus };

struct TermSpec {
  cplx coefficient{1.0, 0.0};
  std::vector<Factor> factors;
  bool hermitian_conjugate_included = false;
  Sector sector = Sector::H0;

  // b, bdag, phi, pi count once per power, n counts twice.
  int degree() const;
  std::vector<int> support() const;
  Poly normal_ordered() const;  // includes the h.c. when flagged
};

enum class Family { BoseHubbardClass, Phi4Class, Explicit };
enum class Boundary { Open, Periodic };

struct LongRange {
  double alpha = 4.0;
  double J0 = 1.0;
};

// The repulsion sum_i U_i n_i^{k/2} (BH class) and sum_i mu_i pi_i^2 (phi4 class)
// are implied by U and mu and are not stored in `terms`.
struct ModelSpec {
  Family family = Family::Explicit;
  int n_sites = 1;
  int k = 4;
  std::vector<TermSpec> terms;
  std::vector<double> U;
  std::vector<double> mu;
  std::optional<LongRange> long_range;
  Boundary boundary = Boundary::Open;
  std::string name;

  void validate() const;
  // terms plus the implied repulsion / kinetic terms
  std::vector<TermSpec> expanded_terms() const;
  bool parity_symmetric() const;
};

struct ModelConstants {
  int k = 0;
  std::vector<std::vector<double>> J_bar;  // [site][k1], k1 = 0..k
  std::vector<double> J_bar_max;           // [k1]
  double J_cal = 0.0;                      // aggregate constant over degrees
  std::vector<double> v_bar;               // [k1], k1 = 0..k/2
  double f_bar = 0.0;
  double f_bar_prime = 0.0;
  double mu_bar = 0.0;
  double g = 0.0;         // pair form, divided by the decay profile
  double g_onsite = 0.0;  // max_i sum_{Z containing i} J_Z
  int g_probe_max = 16;
  std::vector<double> U;
  std::vector<double> mu;
  double alpha_bar = 2.0;  // decay exponent of the profile used for g
  std::vector<bool> repulsive;
};

// Builders.
ModelSpec standard_bose_hubbard(int L, double J, double U, Boundary boundary = Boundary::Open);
ModelSpec standard_phi4(int L, double lambda, double gamma, Boundary boundary = Boundary::Open);
ModelSpec long_range_bose_hubbard(int L, double alpha, double J0, double U);
double long_range_hopping(double r, double alpha, double J0);
// Decay profile 1/((r^2+1)(r^abar+1)).
double decay_profile(double r, double alpha_bar);

SparseOperator term_operator(const TermSpec& term, const FockSpace& space);
SparseOperator build_hamiltonian(const ModelSpec& spec, const FockSpace& space);
// Only terms whose support passes `keep`.
SparseOperator build_hamiltonian_filtered(const ModelSpec& spec, const FockSpace& space,
                                          const std::function<bool(const std::vector<int>&)>& keep);
// Terms supported inside `region`, acting on the full space or on the region's own space.
SparseOperator region_hamiltonian(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& region,
                                  bool reduced);

// Sum of `terms` (all supported inside `support`) on the support's own space, with the cutoffs of `space`.
SparseOperator support_operator(const std::vector<TermSpec>& terms, const std::vector<int>& support,
                                const FockSpace& space);

ModelConstants extract_constants(const ModelSpec& spec, int g_probe_max = 16);

// Every term grouped by support set, as in H = sum_Z h_Z.
std::vector<std::pair<std::vector<int>, std::vector<TermSpec>>> group_by_support(const ModelSpec& spec);

const char* family_name(Family f);

}  // namespace bw
