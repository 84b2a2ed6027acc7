#include <doctest.h>

#include <random>

#include "bosonwb/models.hpp"
#include "bosonwb/spectra.hpp"
#include "oracles.hpp"

using namespace bw;

namespace {

CMat random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("Krylov eigenvalues match dense diagonalization") {
  const std::vector<int> c{5, 5, 5, 5};
  const auto H = build_hamiltonian(long_range_bose_hubbard(4, 4.0, 1.0, 3.0), FockSpace(c));
  EigenOptions o;
  o.force_krylov = true;
  o.n_eigs = 4;
  o.tol = 1e-12;
  const auto sd = ground_state(H, o);
  const auto ev = oracle::eigenvalues(oracle::long_range_bose_hubbard(c, 4.0, 1.0, 3.0));
  CHECK(sd.meta.converged);
  CHECK(std::abs(sd.E0 - ev[0]) < 1e-10);
  CHECK(std::abs(sd.gap - (ev[1] - ev[0])) < 1e-10);
  CHECK((H.apply(sd.ground) - sd.E0 * sd.ground).norm() < 1e-8);
  for (const auto& [val, res] : sd.low_eigs) {
    double best = 1e300;
    for (double e : ev) best = std::min(best, std::abs(val - e));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("dense and Krylov paths agree on random matrices") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CMat h = random_hermitian(120, seed);
    EigenOptions o;
    o.n_eigs = 3;
    const auto d = dense_lowest(h, o);
    const auto k = lanczos_lowest(as_linear(h), o);
    const auto ev = oracle::eigenvalues(h);
    CHECK(std::abs(d.E0 - ev[0]) < 1e-10);
    CHECK(std::abs(k.E0 - ev[0]) < 1e-10);
    CHECK(std::abs(k.gap - (ev[1] - ev[0])) < 1e-10);
  }
}

TEST_CASE("shift-invert reaches the same ground state") {
  const auto H = build_hamiltonian(standard_phi4(1, 1.0, 0.0), FockSpace({600}));
  EigenOptions plain;
  plain.force_krylov = true;
  EigenOptions si;
  si.transform = Transform::ShiftInvert;
  si.shift = 5.0;  // above E0; must be lowered automatically
  const auto a = ground_state(H, plain);
  const auto b = ground_state(H, si);
  CHECK(std::abs(a.E0 - b.E0) < 1e-9);
  CHECK(std::abs(a.gap - b.gap) < 1e-8);
  CHECK(std::abs(std::abs(a.ground.dot(b.ground)) - 1.0) < 1e-9);
}

TEST_CASE("degenerate ground states are flagged") {
  CMat h = CMat::Zero(4, 4);
  h(2, 2) = 1.0;
  h(3, 3) = 2.0;
  const auto sd = dense_lowest(h, EigenOptions{});
  CHECK(sd.degenerate);
  CHECK(sd.gap == doctest::Approx(0.0));
}

TEST_CASE("solves are deterministic for a fixed seed") {
  const auto H = build_hamiltonian(standard_bose_hubbard(3, 1.0, 1.0), FockSpace::uniform(3, 6));
  EigenOptions o;
  o.force_krylov = true;
  const auto a = ground_state(H, o);
  const auto b = ground_state(H, o);
  CHECK(a.E0 == b.E0);
  CHECK((a.ground - b.ground).norm() == 0.0);
}

TEST_CASE("spectral projectors") {
  const auto H = build_hamiltonian(standard_bose_hubbard(2, 1.0, 2.0), FockSpace::uniform(2, 4));
  const CMat h = H.dense();
  const auto ev = oracle::eigenvalues(h);
  const double thr = 0.5 * (ev[5] + ev[6]);
  const CMat P = spectral_projector_dense(h, thr, Side::LessEqual);
  CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((P * h - h * P).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(std::abs(P.trace() - cplx(6.0)) < 1e-10);
  const CMat Q = spectral_projector_dense(h, thr, Side::Greater);
  CHECK((P + Q - CMat::Identity(h.rows(), h.cols())).cwiseAbs().maxCoeff() < 1e-12);
  const auto Ps = spectral_projector(H, thr, Side::LessEqual);
  CHECK((Ps.dense() - P).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norm estimates match dense values") {
  const CMat h = random_hermitian(80, 9);
  const auto ev = oracle::eigenvalues(h);
  CHECK(hermitian_norm(as_linear(h)) == doctest::Approx(std::max(std::abs(ev[0]), std::abs(ev[79]))).epsilon(1e-9));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  CMat a(60, 60);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  const CMat ad = a.adjoint();
  const double smax = Eigen::JacobiSVD<CMat>(a).singularValues()[0];
  CHECK(operator_norm(as_linear(a), as_linear(ad)) == doctest::Approx(smax).epsilon(1e-9));
}

TEST_CASE("subset Hamiltonians") {
  const auto spec = standard_bose_hubbard(3, 1.0, 1.5);
  const FockSpace s = FockSpace::uniform(3, 3);
  const auto h = subset_hamiltonian(spec, s, {1, 2}, true);
  CHECK((h.dense() - oracle::bose_hubbard({3, 3}, 1.0, 1.5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random start vectors are unit norm and reproducible") {
  const auto v = random_unit_vector(50, 3);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK((v - random_unit_vector(50, 3)).norm() == 0.0);
  const auto w = fock_weighted_start(FockSpace::uniform(2, 5), 1);
  CHECK(w.norm() == doctest::Approx(1.0));
}
