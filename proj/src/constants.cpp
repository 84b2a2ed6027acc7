#include "bosonwb/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace bw {

namespace {

constexpr double kE = 2.718281828459045;

double profile(double r, double alpha_bar) { return 1.0 / ((r * r + 1.0) * (std::pow(r, alpha_bar) + 1.0)); }

double power0(double base, double e) { return (base == 0.0 && e == 0.0) ? 1.0 : std::pow(base, e); }

// Adaptive Gauss-Kronrod in t = log(1 + z) over [0, log(1 + Z)].
template <class F>
double integrate_log(F f, double Z, double tol, double& err) {
  auto g = [&](double t) {
    const double z = std::expm1(t);
    return f(z) * (z + 1.0);
  };
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, std::log1p(Z), 20, tol, &e);
  err = e;
  return v;
}

}  // namespace

double GrowthProfile::operator()(double r) const { return g0 + g1 * std::pow(std::log(r + 1.0), chi); }

GrowthProfile growth_profile(double g, double a, double b, int k, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("growth_profile: eps0 must lie in (0, 1)");
  const double e = a * k / 2.0;
  GrowthProfile p;
  p.chi = e;
  p.g0 = g * std::pow(b, -e) * std::pow(2.0, e) * std::pow(std::log(1.0 / eps0), e);
  p.g1 = g * std::pow(b, -e) * std::pow(6.0, e);
  return p;
}

double eta_series(int p, const GrowthProfile& g, double alpha_bar, double r, int y0) {
  const int Y = std::max(y0, 1) + 4096;
  double s = 0.0;
  for (int y = y0; y <= Y; ++y) s += g(r + y) * (power0(y, p - 1) + 1.0) * profile(y, alpha_bar);
  // For y > Y: gbar_{r+y} <= gbar_{r+Y} (y/Y)^eps and (y^{p-1}+1) Jbar(y) <= 2 y^{p-3-abar}.
  const double eps = g.chi / std::log(r + Y + 1.0);
  const double expo = 2.0 + alpha_bar - p - eps;
  if (!(expo > 0.0)) return INFINITY;
  s += 2.0 * g(r + Y) * std::pow(Y, -eps) * std::pow(Y, p - 2.0 - alpha_bar + eps) / expo;
  return s;
}

EtaResult eta_parameter(int p, const GrowthProfile& g, double alpha_bar) {
  std::vector<double> rs, ys;
  for (int v = 0; v <= 32; ++v) rs.push_back(v), ys.push_back(v);
  for (double v = 48; v <= 1e6; v *= 1.5) rs.push_back(std::floor(v));
  for (double v = 48; v <= 2e3; v *= 1.5) ys.push_back(std::floor(v));
  EtaResult best;
  for (double r : rs) {
    for (double y0 : ys) {
      const double lhs = eta_series(p, g, alpha_bar, r, static_cast<int>(y0));
      const double rhs = g(r + y0) * (power0(y0, p) + 1.0) * profile(y0, alpha_bar);
      const double ratio = lhs / rhs;
      if (ratio > best.eta) best = {ratio, r, y0};
    }
  }
  return best;
}

Quadrature mu1_integral(double chi, double tol) {
  auto f = [chi](double z) { return (z + 3.0) * std::exp(-z / (4.0 * kE * (1.0 + std::pow(std::log(z + 3.0), chi)))); };
  // (1 + log^chi(z+3)) / sqrt(z) decreases once z + 3 > e^{2 chi}; bound the integrand by (z+3) exp(-c sqrt z) beyond Z.
  double Z = std::max(64.0, std::exp(2.0 * chi));
  double tail = INFINITY;
  for (int it = 0; it < 400; ++it) {
    const double A = (1.0 + std::pow(std::log(Z + 3.0), chi)) / std::sqrt(Z);
    const double c = 1.0 / (4.0 * kE * A);
    const double x = c * std::sqrt(Z);
    tail = 2.0 * (boost::math::tgamma(4.0, x) / std::pow(c, 4) + 3.0 * boost::math::tgamma(2.0, x) / (c * c));
    if (tail < 1e-8) break;
    Z *= 2.0;
  }
  Quadrature q;
  double err = 0.0;
  q.value = 1.0 + integrate_log(f, Z, tol, err);
  q.error = err + tail;
  q.cutoff = Z;
  return q;
}

Quadrature mu2_integral(double kappa, double chi, double tol) {
  if (!(kappa > 0.0)) throw std::invalid_argument("mu2_integral: kappa must be positive");
  const double s = 1.0 + chi;
  auto f = [=](double z) { return (z + 3.0) * std::exp(-std::pow(kappa * z, 1.0 / s)); };
  // exact tail with w = (kappa z)^{1/s}
  auto tail_at = [=](double Z) {
    const double w = std::pow(kappa * Z, 1.0 / s);
    return s / (kappa * kappa) * boost::math::tgamma(2.0 * s, w) + 3.0 * s / kappa * boost::math::tgamma(s, w);
  };
  double Z = 64.0 / kappa;
  while (tail_at(Z) > 1e-8) Z *= 2.0;
  Quadrature q;
  double err = 0.0;
  q.value = 1.0 + integrate_log(f, Z, tol, err);
  q.error = err + tail_at(Z);
  q.cutoff = Z;
  return q;
}

double mu2_closed_form(double kappa, double chi) {
  const double s = 1.0 + chi;
  return 1.0 + s / (kappa * kappa) * std::tgamma(2.0 * s) + 3.0 * s / kappa * std::tgamma(s);
}

double PartTwoConstants::T(double m) const {
  return (2.0 * c0 * c3t + c1t) * gbar(m + ql()) + c2t * gbar.g1 * power0(m, chi);
}

double PartTwoConstants::T_tilde(double z) const { return (2.0 * c0 * c3t + c1t) * gbar(z + ql()); }

double PartTwoConstants::calE(double y) const {
  if (!(y > 0.0)) return INFINITY;
  const double t1 = mu1.value * std::exp(-y / (4.0 * kE * T_tilde(y / T0())));
  const double t2 = mu2.value * std::exp(-std::pow(y / (4.0 * kE * c2t * gbar.g1), 1.0 / (1.0 + chi)));
  return t1 + t2;
}

double PartTwoConstants::eps1(double tau) const {
  return 2.0 * q * calE(tau - 4.0 * c0 * gbar(ql()) - 8.0 * T0());
}

double PartTwoConstants::eps2(double tau) const {
  const double e1 = eps1(tau);
  if (!(e1 < 1.0)) return INFINITY;
  return std::sqrt(e1 / (1.0 - e1) * 2.0 * q * (tau + 2.0 * c0 * gbar(ql())));
}

double PartTwoConstants::interaction_truncation_bound() const {
  return 4.0 * eta1 * eta2 * q * gbar(ql()) * (static_cast<double>(l) * l + 1.0) * profile(l, alpha_bar);
}

double PartTwoConstants::compressed_norm_bound(double tau) const { return 2.0 * q * (tau + 2.0 * c0 * gbar(ql())); }

double PartTwoConstants::prop_multicommutator_bound(int m) const { return power0(T(m) * m, m); }

double PartTwoConstants::lemma_multicommutator_bound(int m, double ell) const {
  const double a = alpha_bar;
  return std::pow(2.0, a) * power0(c1t * m * gbar(m + ell), m) +
         2.0 * ((2.0 + a) / a) * power0(c2t * gbar.g1 * power0(m, chi + 1.0), m);
}

double PartTwoConstants::displacement_bound(double tau, double gap_t) const {
  const double e1 = eps1(tau), e2 = eps2(tau);
  const double d = gap_t - 2.0 * e2 * e2;
  if (!(d > 0.0)) return INFINITY;
  return std::sqrt(2.0) * e1 + std::sqrt(2.0 * gap_t) / d * e2;
}

double PartTwoConstants::gap_bound(double tau, double gap_t) const {
  const double e1 = eps1(tau), e2 = eps2(tau);
  return (1.0 - e1 * e1) * gap_t - 2.0 * e2 * e2;
}

double PartTwoConstants::tau_for_eps1(double target) const {
  double lo = 4.0 * c0 * gbar(ql()) + 8.0 * T0();
  double hi = 2.0 * lo + 1.0;
  int guard = 0;
  while (!(eps1(hi) <= target)) {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi)) return INFINITY;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eps1(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

nlohmann::json PartTwoConstants::to_json() const {
  return {{"k", k},
          {"alpha_bar", alpha_bar},
          {"chi", chi},
          {"g0", gbar.g0},
          {"g1", gbar.g1},
          {"q", q},
          {"l", l},
          {"eta1", eta1},
          {"eta2", eta2},
          {"Jbar1", J1},
          {"c0", c0},
          {"c1_tilde", c1t},
          {"c2_tilde", c2t},
          {"c3_tilde", c3t},
          {"T0", T0()},
          {"mu1", mu1.value},
          {"mu1_error", mu1.error},
          {"mu2", mu2.value},
          {"mu2_error", mu2.error}};
}

PartTwoConstants part_two_constants(int k, double alpha_bar, double chi, const GrowthProfile& gbar, int q, int l) {
  if (q < 2 || q % 2 != 0) throw std::invalid_argument("part_two_constants: q must be even and >= 2");
  if (!(alpha_bar > 0.0)) throw std::invalid_argument("part_two_constants: alpha_bar must be positive");
  PartTwoConstants c;
  c.k = k;
  c.alpha_bar = alpha_bar;
  c.chi = chi;
  c.gbar = gbar;
  c.gbar.chi = chi;
  c.q = q;
  c.l = l;
  c.eta1 = eta_parameter(1, c.gbar, alpha_bar).eta;
  c.eta2 = eta_parameter(2, c.gbar, alpha_bar).eta;
  c.J1 = profile(1.0, alpha_bar);
  c.c0 = 4.0 * c.eta1 * c.eta2 * c.J1;
  c.c1t = std::pow(2.0, chi + 3.0) * 4.0 * k * c.eta1 / (1.0 - std::pow(2.0, -alpha_bar));
  c.c2t = c.c1t * std::pow(2.0 * chi * (2.0 + alpha_bar) / alpha_bar, chi);
  c.c3t = std::pow(2.0, alpha_bar) + 2.0 * (2.0 + alpha_bar) / alpha_bar;
  c.mu1 = mu1_integral(chi);
  const double kappa = (2.0 * c.c0 * c.c3t + c.c1t) / (4.0 * kE * c.c2t);
  c.mu2 = mu2_integral(kappa, chi);
  return c;
}

}  // namespace bw
