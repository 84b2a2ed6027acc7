#include <doctest.h>

#include <cmath>
#include <random>

#include "bosonwb/agsp.hpp"
#include "oracles.hpp"

using namespace bw;

namespace {

PipelineConfig small_config(bool long_range) {
  PipelineConfig c;
  c.spec = long_range ? long_range_bose_hubbard(4, 4.0, 1.0, 4.0) : standard_bose_hubbard(4, 1.0, 4.0);
  c.ambient_cutoff = 3;
  c.q = 2;
  c.l = 1;
  c.schedule.eps0 = 0.1;
  c.schedule.a = 1.0;
  c.schedule.b = 2.0;
  c.taus = {1.0, 4.0, 1e4};
  return c;
}

const PipelineResult& lr_pipeline() {
  static const PipelineResult r = run_pipeline(small_config(true));
  return r;
}

// T_m(y) for real y, written without the recurrence
double chebyshev(int m, double y) {
  if (std::abs(y) <= 1.0) return std::cos(m * std::acos(y));
  const double v = std::cosh(m * std::acosh(std::abs(y)));
  return (y < 0 && m % 2) ? -v : v;
}

CMat random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("distance to the cut bond") {
  CHECK(distance_to_cut(2, 3) == 0);
  CHECK(distance_to_cut(3, 3) == 0);
  CHECK(distance_to_cut(0, 3) == 2);
  CHECK(distance_to_cut(5, 3) == 2);
}

TEST_CASE("truncation schedule") {
  TruncationSchedule s{0.1, 1.0, 2.0, 1};
  CHECK(s.cutoff_at(0) == static_cast<int>(std::ceil(std::log(10.0) / 2.0)));
  CHECK(s.cutoff_at(2) == static_cast<int>(std::ceil((std::log(10.0) + std::log(9.0)) / 2.0)));
  for (int d = 0; d < 20; ++d) CHECK(s.cutoff_at(d + 1) >= s.cutoff_at(d));
  const auto cut = s.cutoffs(6, 3);
  CHECK(cut == std::vector<int>{s.cutoff_at(2), s.cutoff_at(1), s.cutoff_at(0), s.cutoff_at(0), s.cutoff_at(1),
                                s.cutoff_at(2)});
  TruncationSchedule floor{0.9, 1.0, 100.0, 3};
  CHECK(floor.cutoff_at(0) == 3);
}

TEST_CASE("block decomposition for L=8, q=2, l=2") {
  const auto b = BlockDecomposition::make(8, 2, 2);
  REQUIRE(b.blocks.size() == 4);
  CHECK(b.blocks[0] == std::vector<int>{0, 1});
  CHECK(b.blocks[1] == std::vector<int>{2, 3});
  CHECK(b.blocks[2] == std::vector<int>{4, 5});
  CHECK(b.blocks[3] == std::vector<int>{6, 7});
  CHECK(b.cut == 4);
  CHECK(b.tilde_first == std::vector<int>{0, 1});
  CHECK(b.tilde_last == std::vector<int>{6, 7});
  CHECK(b.block_of(5) == 2);
  CHECK(b.left_sites() == std::vector<int>{0, 1, 2, 3});
  CHECK(b.keeps({2, 3}));
  CHECK(b.keeps({3, 4}));
  CHECK_FALSE(b.keeps({1, 4}));
  CHECK_FALSE(b.keeps({2, 6}));

  const auto w = BlockDecomposition::make(10, 2, 2);
  CHECK(w.blocks[0] == std::vector<int>{0, 1, 2});
  CHECK(w.tilde_first == std::vector<int>{1, 2});
  CHECK(w.keeps({1, 3}));
  CHECK_FALSE(w.keeps({0, 3}));  // outside the tilde part of B_0
  CHECK(w.keeps({0, 2}));        // inside B_0
}

TEST_CASE("state embedding and phase-free distance") {
  const FockSpace small({2, 3}), large({4, 3});
  const Vec v = random_unit_vector(small.dim(), 5);
  const Vec up = embed_state(small, large, v);
  CHECK(up.norm() == doctest::Approx(1.0));
  CHECK((restrict_state(large, small, up) - v).norm() < 1e-15);
  CHECK(state_distance(v, cplx(0.0, 1.0) * v) < 1e-12);
  const Vec w = random_unit_vector(small.dim(), 6);
  CHECK(state_distance(v, w) <= (v - w).norm() + 1e-12);
}

TEST_CASE("projection lemma limits") {
  const auto z = projection_lemma(0.0, 0.0, 0.3);
  CHECK(z.applicable);
  CHECK(z.displacement_bound == doctest::Approx(0.0));
  CHECK(z.gap_bound == doctest::Approx(0.3));
  CHECK_FALSE(projection_lemma(0.6, 0.0, 0.3).applicable);
  CHECK_FALSE(projection_lemma(0.1, 0.2, 0.3).applicable);
}

TEST_CASE("boson truncation at the ambient cutoff is exact") {
  const auto spec = standard_bose_hubbard(3, 1.0, 2.0);
  const auto amb = FockSpace::uniform(3, 3);
  const auto H = build_hamiltonian(spec, amb);
  const auto sd = ground_state(H);
  const auto bt = boson_truncate(spec, amb, H, sd, {3, 3, 3});
  CHECK(bt.displacement < 1e-9);
  CHECK(bt.sd.E0 == doctest::Approx(sd.E0).epsilon(1e-12));
  CHECK(bt.report.passed());
}

TEST_CASE("nearest-neighbour couplings survive interaction truncation") {
  const auto r = run_pipeline(small_config(false));
  REQUIRE(r.it);
  CHECK(r.it->dH_norm < 1e-12);
  CHECK(r.it->displacement < 1e-9);
  CHECK(combine(r.reports()) == Status::Pass);
}

TEST_CASE("small long-range pipeline") {
  const auto& r = lr_pipeline();
  CHECK(combine(r.reports()) == Status::Pass);
  REQUIRE(r.it);
  CHECK(r.it->dH_norm > 0.0);
  CHECK(r.it->dH_norm <= r.pc.interaction_truncation_bound());
  // a large tau keeps every block state and the compression is exact
  const auto& full = r.ecs[2];
  CHECK(full.iso.kept_dim() == full.iso.full_dim());
  CHECK(full.displacement < 1e-9);
  // eps_K falls with the degree and stays below its bound
  REQUIRE(r.agsp.size() == 4);
  for (std::size_t i = 0; i < r.agsp.size(); ++i) {
    CHECK(r.agsp[i].eps_K <= r.agsp[i].eps_bound);
    CHECK(r.agsp[i].fixes_ground < 1e-8);
    if (i) CHECK(r.agsp[i].eps_K < r.agsp[i - 1].eps_K);
  }
}

TEST_CASE("a projector passes the certificate trivially") {
  const auto& r = lr_pipeline();
  const auto st = r.stages(0);
  const Vec g = st.ec->sd.ground;
  const LinearOperator P{g.size(), [g](const Vec& x, Vec& y) { y = g * g.dot(x); }};
  const auto rep = agsp_certificate(P, 1, 0.0, st);
  CHECK(rep.eps_K < 1e-10);
  CHECK(rep.fixes_ground < 1e-12);
  CHECK(rep.report.passed());
}

TEST_CASE("energy cutoff rejects a negative tau") {
  const auto& r = lr_pipeline();
  CHECK_THROWS(energy_cutoff(r.spec, r.bt->space, *r.it, r.blocks, -1.0, r.pc));
}

TEST_CASE("Chebyshev AGSP against a dense spectral oracle") {
  const CMat h = random_hermitian(40, 12);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const auto& ev = es.eigenvalues();
  const double E0 = ev[0], gap = ev[1] - ev[0], W = 1.05 * (ev[39] - ev[0]);
  for (int m : {1, 2, 5, 9}) {
    const ChebyshevAGSP K(as_linear(h), E0, gap, W, m);
    const double y0 = -(W + gap) / (W - gap);
    Eigen::VectorXd f(40);
    for (int i = 0; i < 40; ++i) f[i] = chebyshev(m, (2.0 * (ev[i] - E0) - (W + gap)) / (W - gap)) / chebyshev(m, y0);
    const CMat dense = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
    const Vec x = random_unit_vector(40, 3), z = random_unit_vector(40, 4);
    CHECK((K.apply(x) - dense * x).norm() < 1e-10);
    // linearity
    CHECK((K.apply(Vec(2.0 * x + cplx(0, 1) * z)) - 2.0 * K.apply(x) - cplx(0, 1) * K.apply(z)).norm() < 1e-10);
    CHECK(K.scalar(0.0) == doctest::Approx(1.0));
    CHECK(std::log(std::abs(chebyshev(m, y0))) == doctest::Approx(K.log_denominator()).epsilon(1e-10));
    for (double x01 = 0.0; x01 <= 1.0; x01 += 0.01)
      CHECK(std::abs(K.scalar(gap + x01 * (W - gap))) <= K.error_bound() * (1 + 1e-12));
  }
}

TEST_CASE("degree one is the affine filter") {
  const CMat h = random_hermitian(20, 2);
  const auto sd = dense_lowest(h, EigenOptions{});
  const double W = 3.0 * sd.gap + 10.0;
  const ChebyshevAGSP K(as_linear(h), sd.E0, sd.gap, W, 1);
  const CMat affine = CMat::Identity(20, 20) - 2.0 * (h - sd.E0 * CMat::Identity(20, 20)) / (W + sd.gap);
  const Vec x = random_unit_vector(20, 8);
  CHECK((K.apply(x) - affine * x).norm() < 1e-12);
  CHECK_THROWS(ChebyshevAGSP(as_linear(h), sd.E0, sd.gap, W, 0));
  CHECK_THROWS(ChebyshevAGSP(as_linear(h), sd.E0, W + 1.0, W, 2));
}

TEST_CASE("Schmidt-rank bound grows with the degree") {
  double prev = -1.0;
  for (int m = 0; m <= 20; m += 2) {
    const double b = log10_schmidt_rank_bound(m, 2, 2, 4, 4);
    CHECK(b > prev);
    prev = b;
  }
  CHECK(log10_schmidt_rank_bound(0, 2, 2, 4, 4) == doctest::Approx(0.0).epsilon(1e-12));
}
