#include <doctest.h>

#include <cmath>

#include "bosonwb/constants.hpp"

using namespace bw;

namespace {

double jbar(double r, double abar) { return 1.0 / ((r * r + 1.0) * (std::pow(r, abar) + 1.0)); }

// composite Simpson on [0, Z]
template <class F>
double simpson(F f, double Z, int n) {
  const double h = Z / n;
  double s = f(0.0) + f(Z);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("growth profile formula") {
  const auto g = growth_profile(1.0, 1.0, 2.0, 4, 0.1);
  CHECK(g.chi == doctest::Approx(2.0));
  CHECK(g.g0 == doctest::Approx(std::pow(std::log(10.0), 2)));
  CHECK(g.g1 == doctest::Approx(9.0));
  CHECK(g(0.0) == doctest::Approx(g.g0));
  CHECK(g(std::exp(1.0) - 1.0) == doctest::Approx(g.g0 + 9.0));
  CHECK_THROWS(growth_profile(1.0, 1.0, 2.0, 4, 1.5));
}

TEST_CASE("mu2 quadrature matches the Gamma closed form") {
  for (auto [kappa, chi] : {std::pair{0.5, 1.0}, std::pair{2.0, 2.0}, std::pair{0.05, 1.5}}) {
    const double s = 1.0 + chi;
    const double closed = 1.0 + s / (kappa * kappa) * std::tgamma(2.0 * s) + 3.0 * s / kappa * std::tgamma(s);
    const auto q = mu2_integral(kappa, chi);
    CHECK(q.value == doctest::Approx(closed).epsilon(1e-9));
    CHECK(mu2_closed_form(kappa, chi) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(q.error <= 1e-6 * q.value);
  }
}

TEST_CASE("mu1 quadrature matches a brute-force Simpson sum") {
  for (double chi : {1.0, 1.5}) {
    auto f = [chi](double z) {
      return (z + 3.0) * std::exp(-z / (4.0 * std::exp(1.0) * (1.0 + std::pow(std::log(z + 3.0), chi))));
    };
    const double ref = 1.0 + simpson(f, 2.0e5, 4000000);
    const auto q = mu1_integral(chi);
    CHECK(q.value == doctest::Approx(ref).epsilon(1e-7));
    CHECK(q.error <= 1e-6 * q.value);
  }
  CHECK(mu1_integral(2.0).value > mu1_integral(1.0).value);
}

TEST_CASE("eta series bounds a long direct sum tightly") {
  const auto g = growth_profile(1.0, 1.0, 2.0, 4, 0.1);
  for (int p : {1, 2})
    for (auto [r, y0] : {std::pair{0.0, 0}, std::pair{5.0, 3}, std::pair{40.0, 17}}) {
      double direct = 0.0;
      for (int y = y0; y <= 2000000; ++y)
        direct += g(r + y) * ((p == 1 ? 1.0 : (y == 0 ? 0.0 : y)) + 1.0) * jbar(y, 2.0);
      // the closed tail is an upper bound on the remainder past the explicit range
      const double s = eta_series(p, g, 2.0, r, y0);
      CHECK(s >= direct * (1 - 1e-12));
      CHECK(s <= direct * (1 + 1e-3));
    }
}

TEST_CASE("eta dominates every sampled ratio") {
  const auto g = growth_profile(1.0, 1.0, 2.0, 4, 0.1);
  const auto e = eta_parameter(2, g, 2.0);
  CHECK(e.eta >= 1.0);
  for (double r : {0.0, 3.0, 100.0})
    for (int y0 : {0, 1, 7, 30}) {
      const double rhs = g(r + y0) * (std::pow(y0, 2) + 1.0) * jbar(y0, 2.0);
      CHECK(eta_series(2, g, 2.0, r, y0) <= e.eta * rhs * (1 + 1e-12));
    }
}

TEST_CASE("part-two constants and the energy-cutoff errors") {
  const auto g = growth_profile(1.0, 1.0, 2.0, 4, 0.1);
  const auto c = part_two_constants(4, 2.0, 2.0, g, 2, 2);
  CHECK(c.c0 == doctest::Approx(4.0 * c.eta1 * c.eta2 * jbar(1.0, 2.0)));
  CHECK(c.T0() == doctest::Approx((2.0 * c.c0 * c.c3t + c.c1t) * g(4.0)));
  CHECK(std::isinf(c.eps1(0.0)));
  CHECK(std::isinf(c.eps2(0.0)));
  const double tau = c.tau_for_eps1(std::sqrt(0.5));
  REQUIRE(std::isfinite(tau));
  CHECK(c.eps1(tau) <= std::sqrt(0.5) * (1 + 1e-9));
  CHECK(c.eps1(0.999 * tau) > std::sqrt(0.5));
  // eps1 decreases in tau
  CHECK(c.eps1(2.0 * tau) < c.eps1(tau));
  CHECK(c.compressed_norm_bound(1.0) == doctest::Approx(4.0 * (1.0 + 2.0 * c.c0 * g(4.0))));
  CHECK(c.interaction_truncation_bound() ==
        doctest::Approx(4.0 * c.eta1 * c.eta2 * 2.0 * g(4.0) * 5.0 * jbar(2.0, 2.0)));
  CHECK_THROWS(part_two_constants(4, 2.0, 2.0, g, 3, 2));
  CHECK_NOTHROW(c.to_json().dump());
}

TEST_CASE("displacement bound is infinite when the gap cannot absorb eps2") {
  const auto g = growth_profile(1.0, 1.0, 2.0, 4, 0.1);
  const auto c = part_two_constants(4, 2.0, 2.0, g, 2, 2);
  const double tau = c.tau_for_eps1(std::sqrt(0.5));
  CHECK(std::isinf(c.displacement_bound(tau, 0.1)));
  CHECK(c.gap_bound(tau, 0.1) < 0.0);
}
