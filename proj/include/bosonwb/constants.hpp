// Constants of the effective-Hamiltonian analysis: growth profile, eta_p,
// multicommutator constants, quadratures and the energy-cutoff errors.
#pragma once

#include "json.hpp"

namespace bw {

// gbar_r = g0 + g1 log^chi(r + 1)
struct GrowthProfile {
  double g0 = 0.0;
  double g1 = 0.0;
  double chi = 1.0;
  double operator()(double r) const;
};

// g0 = g b^{-ak/2} 2^{ak/2} log^{ak/2}(1/eps0), g1 = g b^{-ak/2} 6^{ak/2}, chi = ak/2
GrowthProfile growth_profile(double g, double a, double b, int k, double eps0);

// Smallest eta with sum_{y>=y0} gbar_{r+y} (y^{p-1} + 1) Jbar(y) <= eta gbar_{r+y0} (y0^p + 1) Jbar(y0),
// maximized over a grid of (r, y0). Jbar is the decay profile with exponent alpha_bar.
struct EtaResult {
  double eta = 0.0;
  double r_at = 0.0;
  double y0_at = 0.0;
};
EtaResult eta_parameter(int p, const GrowthProfile& g, double alpha_bar);
// Left-hand side sum with its analytic tail; exposed for tests.
double eta_series(int p, const GrowthProfile& g, double alpha_bar, double r, int y0);

struct Quadrature {
  double value = 0.0;
  double error = 0.0;  // quadrature estimate plus tail bound
  double cutoff = 0.0; // integration range [0, cutoff] before the tail
};

// 1 + int_0^inf (z + 3) exp(-z / (4e (1 + log^chi(z + 3)))) dz
Quadrature mu1_integral(double chi, double tol = 1e-10);
// 1 + int_0^inf (z + 3) exp(-(kappa z)^{1/(1+chi)}) dz
Quadrature mu2_integral(double kappa, double chi, double tol = 1e-10);
double mu2_closed_form(double kappa, double chi);

struct PartTwoConstants {
  int k = 4;
  double alpha_bar = 2.0;
  double chi = 2.0;
  GrowthProfile gbar;
  int q = 2;
  int l = 1;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double J1 = 0.0;  // Jbar(1)
  double c0 = 0.0;
  double c1t = 0.0;
  double c2t = 0.0;
  double c3t = 0.0;
  Quadrature mu1;
  Quadrature mu2;

  double ql() const { return static_cast<double>(q) * l; }
  double T(double m) const;  // T_m
  double T0() const { return T(0.0); }
  double T_tilde(double z) const;
  double calE(double y) const;  // +inf for y <= 0
  double eps1(double tau) const;
  double eps2(double tau) const;
  // ||H_bar - H_t|| <= 4 eta1 eta2 q gbar_{ql} (l^2 + 1) Jbar(l)
  double interaction_truncation_bound() const;
  // ||h_{s,s+1}|| <= c0 gbar_{ql}
  double block_coupling_bound() const { return c0 * gbar(ql()); }
  // ||H~_t - E~_0|| <= 2q (tau + 2 c0 gbar_{ql})
  double compressed_norm_bound(double tau) const;
  // ||ad^m_{H_t}(O_s)|| / ||O_s|| <= (T_m m)^m
  double prop_multicommutator_bound(int m) const;
  // ||ad^m(O_Z0)|| <= 2^abar (c1t m gbar_{m+ell})^m + 2 ((2+abar)/abar) (c2t g1 m^{chi+1})^m
  double lemma_multicommutator_bound(int m, double ell) const;
  // displacement bound sqrt(2) eps1 + sqrt(2 D) eps2 / (D - 2 eps2^2)
  double displacement_bound(double tau, double gap_t) const;
  double gap_bound(double tau, double gap_t) const;
  // Smallest tau with eps1(tau)^2 <= 1/2 (bisection on a monotone function).
  double tau_for_eps1(double eps1_target) const;

  nlohmann::json to_json() const;
};

PartTwoConstants part_two_constants(int k, double alpha_bar, double chi, const GrowthProfile& gbar, int q, int l);

}  // namespace bw
