#include <doctest.h>

#include <cmath>
#include <limits>

#include "bosonwb/models.hpp"
#include "oracles.hpp"

using namespace bw;

namespace {

double diff(const SparseOperator& h, const oracle::Mat& d) { return (h.dense() - d).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Bose-Hubbard assembly matches the dense oracle") {
  const std::vector<int> c{4, 4, 4};
  CHECK(diff(build_hamiltonian(standard_bose_hubbard(3, 0.7, 2.5), FockSpace(c)), oracle::bose_hubbard(c, 0.7, 2.5)) <=
        1e-12);
  const std::vector<int> ring{3, 3, 3, 3};
  CHECK(diff(build_hamiltonian(standard_bose_hubbard(4, -1.0, 1.0, Boundary::Periodic), FockSpace(ring)),
             oracle::bose_hubbard(ring, -1.0, 1.0, true)) <= 1e-12);
  const std::vector<int> mixed{2, 5};
  CHECK(diff(build_hamiltonian(standard_bose_hubbard(2, 1.0, 3.0), FockSpace(mixed)),
             oracle::bose_hubbard(mixed, 1.0, 3.0)) <= 1e-12);
}

TEST_CASE("long-range hopping matches the dense oracle") {
  const std::vector<int> c{3, 3, 3, 3};
  CHECK(diff(build_hamiltonian(long_range_bose_hubbard(4, 3.5, 0.8, 2.0), FockSpace(c)),
             oracle::long_range_bose_hubbard(c, 3.5, 0.8, 2.0)) <= 1e-12);
  CHECK(long_range_hopping(1.0, 4.0, 1.0) == doctest::Approx(0.25));
  CHECK(long_range_hopping(2.0, 4.0, 1.0) == doctest::Approx(1.0 / 25.0));
  CHECK_THROWS(long_range_bose_hubbard(4, 2.0, 1.0, 1.0));
}

TEST_CASE("phi4 assembly matches the dense oracle") {
  const std::vector<int> c{12, 12};
  CHECK(diff(build_hamiltonian(standard_phi4(2, 0.5, 0.3), FockSpace(c)), oracle::phi4(c, 0.5, 0.3)) <= 1e-12);
  const std::vector<int> ring{6, 6, 6};
  CHECK(diff(build_hamiltonian(standard_phi4(3, 1.0, 0.2, Boundary::Periodic), FockSpace(ring)),
             oracle::phi4(ring, 1.0, 0.2, true)) <= 1e-12);
}

TEST_CASE("large cutoffs agree within a few ulp of the largest entry") {
  for (int N : {100, 200, 400}) {
    const auto d = oracle::phi4({N}, 1.0, 0.0);
    const double scale = d.cwiseAbs().maxCoeff();
    CHECK(diff(build_hamiltonian(standard_phi4(1, 1.0, 0.0), FockSpace({N})), d) <=
          64 * std::numeric_limits<double>::epsilon() * scale);
  }
}

TEST_CASE("term degrees and supports") {
  const TermSpec hop{1.0, {{0, OpKind::B}, {2, OpKind::Bdag}}, true, Sector::H0};
  CHECK(hop.degree() == 2);
  CHECK(hop.support() == std::vector<int>{0, 2});
  const TermSpec n2{1.0, {{1, OpKind::NPow, 2}}, false, Sector::H0};
  CHECK(n2.degree() == 4);
  const TermSpec phi4{1.0, {{0, OpKind::Phi, 4}}, false, Sector::H0};
  CHECK(phi4.degree() == 4);
  // b_0 b_2^+ + h.c. normal orders into two monomials of unit weight
  const auto p = hop.normal_ordered();
  CHECK(p.size() == 2);
  for (const auto& [m, coef] : p) CHECK(std::abs(coef - cplx(1.0)) < 1e-15);
}

TEST_CASE("term operators agree with direct products") {
  const FockSpace s({3, 3});
  const TermSpec t{cplx(0.5, 0.25), {{0, OpKind::Bdag}, {1, OpKind::B}}, false, Sector::H0};
  const auto direct = scaled(compose(creation_op(s, 0), annihilation_op(s, 1)), cplx(0.5, 0.25));
  CHECK(max_abs(term_operator(t, s).mat - direct.mat) < 1e-15);
}

TEST_CASE("model validation") {
  auto s = standard_bose_hubbard(3, 1.0, 1.0);
  CHECK_NOTHROW(s.validate());
  s.U.pop_back();
  CHECK_THROWS(s.validate());
  auto t = standard_phi4(2, 1.0, 0.0);
  t.terms.push_back(TermSpec{1.0, {{5, OpKind::Phi}}, false, Sector::H0});
  CHECK_THROWS(t.validate());
}

TEST_CASE("parity symmetry") {
  CHECK(standard_phi4(2, 1.0, 0.5).parity_symmetric());
  auto s = standard_phi4(1, 1.0, 0.0);
  s.terms.push_back(TermSpec{0.1, {{0, OpKind::Phi}}, false, Sector::H0});
  CHECK_FALSE(s.parity_symmetric());
}

TEST_CASE("coupling constants of the standard models") {
  // hopping contributes b^+_i b_j and b^+_j b_i, the -U n term one more degree-2 monomial
  const auto bh = extract_constants(standard_bose_hubbard(3, 1.0, 2.0), 6);
  CHECK(bh.J_bar[0][2] == doctest::Approx(2.0 + 2.0));
  CHECK(bh.J_bar[1][2] == doctest::Approx(4.0 + 2.0));
  CHECK(bh.J_bar[1][4] == doctest::Approx(0.0));
  CHECK(bh.J_cal == doctest::Approx(6.0 * 17.0));
  for (bool r : bh.repulsive) CHECK(r);

  const auto two = extract_constants(standard_bose_hubbard(2, 1.0, 1.0), 6);
  CHECK(two.J_bar[0][2] == doctest::Approx(3.0));
  CHECK(two.J_cal == doctest::Approx(51.0));

  const auto p = extract_constants(standard_phi4(1, 1.0, 0.0), 6);
  CHECK(p.f_bar == doctest::Approx(2.0));
  CHECK(p.mu_bar == doctest::Approx(1.0));
  CHECK(p.f_bar_prime == doctest::Approx(2.0));
}

TEST_CASE("terms group by support") {
  const auto groups = group_by_support(standard_bose_hubbard(3, 1.0, 1.0));
  int pairs = 0, singles = 0;
  for (const auto& [sup, ts] : groups) {
    if (sup.size() == 2) ++pairs;
    if (sup.size() == 1) ++singles;
  }
  CHECK(pairs == 2);
  CHECK(singles == 3);
}

TEST_CASE("region Hamiltonians keep only contained terms") {
  const auto spec = standard_bose_hubbard(3, 1.0, 2.0);
  const std::vector<int> c{3, 3};
  const FockSpace s({3, 3, 3});
  const auto reduced = region_hamiltonian(spec, s, {0, 1}, true);
  CHECK((reduced.dense() - oracle::bose_hubbard(c, 1.0, 2.0)).cwiseAbs().maxCoeff() < 1e-12);
  const auto full = region_hamiltonian(spec, s, {0, 1}, false);
  CHECK(full.dim() == s.dim());
}
