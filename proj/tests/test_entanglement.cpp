#include <doctest.h>

#include <cmath>
#include <random>

#include "bosonwb/entanglement.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/spectra.hpp"
#include "oracles.hpp"

using namespace bw;

namespace {

const SpectralData& chain_ground() {
  static const SpectralData sd = ground_state(
      build_hamiltonian(standard_bose_hubbard(5, 0.3, 3.0), FockSpace::uniform(5, 3)));
  return sd;
}

CMat haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return Eigen::HouseholderQR<CMat>(a).householderQ();
}

}  // namespace

TEST_CASE("entropy of product and maximally entangled states") {
  Vec prod = Vec::Zero(9);
  prod[4] = 1.0;
  CHECK(entropy(schmidt_split(prod, 3, 3)) == doctest::Approx(0.0));
  Vec bell = Vec::Zero(9);
  for (int i = 0; i < 3; ++i) bell[i * 3 + i] = 1.0 / std::sqrt(3.0);
  CHECK(entropy(schmidt_split(bell, 3, 3)) == doctest::Approx(std::log(3.0)));
  CHECK(entropy_bits(schmidt_split(bell, 3, 3)) == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("Schmidt spectrum of a known state") {
  // Schmidt weights 0.5, 0.3, 0.2
  Vec v = Vec::Zero(16);
  v[0] = std::sqrt(0.5);
  v[5] = std::sqrt(0.3);
  v[10] = std::sqrt(0.2);
  const auto s = schmidt_split(v, 4, 4);
  CHECK(s.rank == 3);
  CHECK(s.coefficients[0] * s.coefficients[0] == doctest::Approx(0.5));
  CHECK(s.coefficients[2] * s.coefficients[2] == doctest::Approx(0.2));
  const double S = -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
  CHECK(entropy(s) == doctest::Approx(S));
  CHECK(schmidt_tail(s, 1) == doctest::Approx(0.5));
  CHECK(schmidt_tail(s, 3) == doctest::Approx(0.0));
  // unnormalized input is normalized first
  CHECK(entropy(schmidt_split(Vec(3.0 * v), 4, 4)) == doctest::Approx(S));
}

TEST_CASE("entropy agrees with the reduced-density oracle at every cut") {
  const auto space = FockSpace::uniform(5, 3);
  const auto& sd = chain_ground();
  for (int cut = 1; cut < 5; ++cut)
    CHECK(entropy(schmidt_decompose(sd.ground, space, cut)) ==
          doctest::Approx(oracle::entropy_from_density(sd.ground, space.stride(cut))).epsilon(1e-10));
}

TEST_CASE("entropy is invariant under local basis rotations") {
  const auto space = FockSpace::uniform(5, 3);
  const auto& sd = chain_ground();
  const auto left = static_cast<Eigen::Index>(space.stride(2));
  const auto right = static_cast<Eigen::Index>(space.dim()) / left;
  const double s0 = entropy(schmidt_decompose(sd.ground, space, 2));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const Eigen::Map<const CMat> M(sd.ground.data(), left, right);
    const CMat R = haar_unitary(left, rng) * M * haar_unitary(right, rng).transpose();
    CHECK(std::abs(entropy(schmidt_decompose(Eigen::Map<const Vec>(R.data(), R.size()), space, 2)) - s0) <= 1e-9);
  }
}

TEST_CASE("reduced densities are unit-trace and match the oracle") {
  const auto space = FockSpace::uniform(3, 2);
  const Vec v = random_unit_vector(space.dim(), 2);
  for (int site = 0; site < 3; ++site) {
    const CMat rho = reduced_density(v, space, site);
    CHECK(std::abs(rho.trace() - cplx(1.0)) < 1e-12);
    // <n_site> from the density and from the state
    const auto n = number_op(space, site);
    double tr = 0.0;
    for (int k = 0; k < 3; ++k) tr += k * rho(k, k).real();
    CHECK(tr == doctest::Approx(n.expectation(v).real()).epsilon(1e-12));
  }
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  CHECK(trace_norm(d) == doctest::Approx(0.75));
}

TEST_CASE("MPS truncation tails match the oracle spectra") {
  const auto space = FockSpace::uniform(5, 3);
  const auto& sd = chain_ground();
  for (int D = 1; D <= 6; ++D) {
    const auto m = mps_compress(sd.ground, space, D);
    REQUIRE(m.delta.size() == 4);
    for (int cut = 1; cut < 5; ++cut) {
      const auto left = static_cast<Eigen::Index>(space.stride(cut));
      const Eigen::Map<const CMat> M(sd.ground.data(), left, static_cast<Eigen::Index>(space.dim()) / left);
      Eigen::SelfAdjointEigenSolver<CMat> es(CMat(M * M.adjoint()), Eigen::EigenvaluesOnly);
      double tail = 0.0;
      const auto& p = es.eigenvalues();  // ascending
      for (Eigen::Index i = 0; i + D < p.size(); ++i) tail += std::max(p[i], 0.0);
      CHECK(std::abs(m.delta[cut - 1] - tail) <= 1e-12);
    }
    // the squared form and the all-cuts reduced form hold
    CHECK(m.error * m.error <= m.bound * (1 + 1e-9) + 1e-14);
    for (double r : m.reduced_error) CHECK(r <= m.bound * (1 + 1e-9) + 1e-14);
    CHECK(m.reconstruction.norm() <= 1.0 + 1e-12);
  }
  const auto exact = mps_compress(sd.ground, space, 81);
  CHECK(exact.error < 1e-12);
  CHECK(exact.report.passed());
}

TEST_CASE("the literal global MPS bound fails below the Eckart-Young floor") {
  // any bond-D state has ||psi - M||^2 >= max_x delta_x, which exceeds (2 sum delta)^2 here
  const auto space = FockSpace::uniform(5, 3);
  const auto m = mps_compress(chain_ground().ground, space, 3);
  double dmax = 0.0;
  for (double d : m.delta) dmax = std::max(dmax, d);
  REQUIRE(m.bound < 0.1);
  CHECK(std::sqrt(dmax) > m.bound);
  CHECK(m.error >= std::sqrt(dmax) * (1 - 1e-9));
  CHECK_FALSE(m.report.passed());
}

TEST_CASE("Eckart-Young") {
  const auto space = FockSpace::uniform(5, 3);
  const auto left = space.stride(2);
  const auto rep = eckart_young_check(chain_ground().ground, left, space.dim() / left, 2, 50, 4);
  CHECK(rep.passed());
  CHECK(rep.rows.size() >= 50);
}

TEST_CASE("memory guard") {
  const Vec v = random_unit_vector(10000, 1);
  CHECK_THROWS_AS(schmidt_split(v, 100, 100, false, 1024), std::length_error);
  CHECK_THROWS(mps_compress(v, FockSpace::uniform(4, 9), 0));
}

TEST_CASE("area-law bound and sweep") {
  const auto p = area_law_params_bh(4);
  CHECK(p.upsilon == doctest::Approx(0.0));
  CHECK(p.chi == doctest::Approx(2.0));
  const auto q = area_law_params_phi4(4);
  CHECK(q.upsilon == doctest::Approx(4.0));
  CHECK(q.chi == doctest::Approx(8.0));
  CHECK(std::isnan(area_law_bound(p, 1.5)));
  CHECK(area_law_bound(p, 0.1) > area_law_bound(p, 0.5));
  const auto rows = bh_entropy_sweep(4, 3, 1.0, {0.05, 0.3}, 2, p);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.entropy >= 0.0);
    CHECK(r.gap > 0.0);
  }
  const auto& sd = chain_ground();
  CHECK(area_law_report(sd, FockSpace::uniform(5, 3), 2, p).passed());
}
