// Checkers for the concentration, moment, trade-off and combinatorial inequalities.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bosonwb/fock.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/report.hpp"
#include "bosonwb/spectra.hpp"

namespace bw {

using TailCurve = std::vector<std::pair<int, double>>;

// Probability that `site` holds at least N bosons.
double tail_probability(const Vec& psi, const FockSpace& space, int site, int N);
// (N, p(n > N)) for N = 0 .. cutoff - 1.
TailCurve tail_curve(const Vec& psi, const FockSpace& space, int site);

// tail ~ c exp(-b N^{1/a})
struct ConcentrationFit {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  int n_min = 0;
  int n_max = 0;
  double residual = 0.0;  // RMS of the log-tail fit
  double floor = 1e-12;
  std::size_t points = 0;

  double inv_a() const { return 1.0 / a; }
  double operator()(double N) const;
};

constexpr double kDefaultFitFloor = 1e-12;

// Points above `floor`, keeping one point per plateau (the last N before the tail drops).
TailCurve fit_window(const TailCurve& curve, double floor = kDefaultFitFloor);
ConcentrationFit fit_concentration(const TailCurve& curve, double floor = kDefaultFitFloor);

struct BhSiteConstants {
  int site = 0;
  double U = 0.0;
  double J_bar_k = 0.0;
  double u = 0.0;  // free positive parameter
  double zeta = 0.0;
  double M = 0.0;
  double base = 0.0;
  bool corollary = false;  // J_bar_k == 0 branch
  bool repulsive = false;
};

struct BhBoundConstants {
  int k = 0;
  double J_cal = 0.0;
  double J_check = 0.0;
  std::vector<BhSiteConstants> sites;
};

double bh_decay_base(double zeta);
// u defaults to (U_i - 5 J_bar_{i,k}) / 2.
BhBoundConstants bh_bound_constants(const ModelConstants& mc, const std::optional<std::vector<double>>& u = {});
// <Pi_{i, >= x}> <= base^{2 (x - M) / k}
double bh_tail_bound(const BhSiteConstants& s, int k, double x);
CheckReport bh_concentration_check(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd,
                                   const std::optional<std::vector<double>>& u = {});

struct Phi4BoundConstants {
  int k = 4;
  double mu_bar = 0.0;
  double f_bar_prime = 0.0;
  double gap = 0.0;
  double max_phi = 0.0;
  double c1_check = 0.0;
  double C_tilde = 0.0;
};

Phi4BoundConstants phi4_bound_constants(const ModelConstants& mc, double gap, double max_abs_phi);
// <Pi_{i, > x}> <= 4 e^k exp(-k x^{1/k} / (8 e C))
double phi4_tail_bound(const Phi4BoundConstants& c, double x);
double max_abs_phi(const FockSpace& space, const Vec& psi);
CheckReport phi4_concentration_check(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd);

// Var(O) Delta <= |<[[H, O], O]>| / 2
struct TradeoffValues {
  double variance = 0.0;
  double gap = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};
TradeoffValues tradeoff_values(const LinearOperator& h, const SpectralData& sd, const LinearOperator& o);
CheckReport tradeoff_check(const LinearOperator& h, const SpectralData& sd, const LinearOperator& o,
                           const std::string& label = "O");
// Random dense Hermitian (H, O) pairs with dimension in [2, max_dim].
CheckReport random_tradeoff_check(int instances, int max_dim, std::uint64_t seed);
// [[pi^2, phi^m], phi^m] + 2 m^2 phi^{2m-2} on the interior, m = 1 .. m_max.
CheckReport phi_double_commutator_check(int m_max, double tol = 1e-9);

CheckReport moment_suite(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd, int s_max = 8);

// |b+_{i_k} .. b+_{i_{s+1}} b_{i_s} .. b_{i_1}| <= prod_j (n_{i_j} + k)^{1/2}
CheckReport hopping_inequality_check(const FockSpace& space, const std::vector<int>& sites, int split);

// Largest sequence allowed by a_m <= zeta (x_{m-1} a_{m-1} + x_{m+1} a_{m+1}) / x_m with a_0 fixed.
std::vector<double> sequence_lemma_oracle(const std::vector<double>& x, double zeta, double a0, std::uint64_t seed);
CheckReport sequence_lemma_check(const std::vector<double>& x, double zeta, int trials, std::uint64_t seed = 3);
CheckReport binomial_lemma_check(int max_m);

// E_{0,X} >= E_{0,Xbar} for X contained in Xbar.
CheckReport subset_energy_check(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& X,
                                const std::vector<int>& Xbar);

// ||ad_H^m(O)|| <= bound(m) for m = 0 .. m_max, matrix-free.
CheckReport multicommutator_norm_check(const SparseOperator& h, const SparseOperator& o, int m_max,
                                       const std::function<double(int)>& bound, double tol = 1e-6);

}  // namespace bw
