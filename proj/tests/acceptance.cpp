// Acceptance run: one line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bosonwb/agsp.hpp"
#include "bosonwb/bounds.hpp"
#include "bosonwb/coefficients.hpp"
#include "bosonwb/entanglement.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/spectra.hpp"
#include "oracles.hpp"

using namespace bw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  // criterion 8 only: the failure matches the recorded analysis
  bool known_failure = false;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const CheckRow* find_row(const CheckReport& r, const std::string& prefix) {
  for (const auto& row : r.rows)
    if (row.label.rfind(prefix, 0) == 0) return &row;
  return nullptr;
}

bool row_ok(const CheckReport& r, const std::string& prefix) {
  const auto* row = find_row(r, prefix);
  return row && row->ok;
}

SpectralData solve_phi4_single(int cutoff) {
  const auto spec = standard_phi4(1, 1.0, 0.0);
  const FockSpace space({cutoff});
  EigenOptions o;
  o.transform = Transform::ShiftInvert;
  o.shift = -1.0;
  o.tol = 1e-12;
  return ground_state(build_hamiltonian(spec, space), o);
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const FockSpace space({10000});
  const auto sd = solve_phi4_single(10000);
  const auto fit = fit_concentration(tail_curve(sd.ground, space, 0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = fit.inv_a() >= 0.64 && fit.inv_a() <= 0.74 && fit.b >= 2.0 && fit.b <= 2.5 && secs <= 60.0;
  o.detail = "1/a=" + fmt("%.4f", fit.inv_a()) + " b=" + fmt("%.4f", fit.b) + " c=" + fmt("%.4f", fit.c) +
             " time=" + fmt("%.2fs", secs);
  return o;
}

Outcome criterion2() {
  const auto comm = commutator_identity_check(5, 5, 1e-9);
  const auto expand = lambda_expansion_check(4, 1e-9);
  const auto bound = lambda_bound_check(8);
  double worst = 0.0;
  for (const auto& r : comm.rows) worst = std::max(worst, r.measured);
  Outcome o;
  o.pass = comm.passed() && expand.passed() && bound.passed();
  o.detail = "commutator max dev=" + fmt("%.2e", worst) + " expansion " + status_name(expand.status()) +
             " |lambda| bound s<=8 " + status_name(bound.status());
  return o;
}

Outcome criterion3() {
  const auto rnd = random_tradeoff_check(100, 200, 2024);
  std::size_t violations = rnd.violations();
  int observables = 0;
  auto phi_obs = [&](const ModelSpec& spec, const FockSpace& space) {
    const auto H = build_hamiltonian(spec, space);
    const auto sd = ground_state(H);
    for (int x = 0; x < space.n_sites(); ++x)
      for (int m = 1; m <= 4; ++m) {
        const auto rep = tradeoff_check(as_linear(H), sd, as_linear(power(phi_op(space, x), m)));
        violations += rep.violations() + (rep.hypothesis_ok ? 0 : 1);
        ++observables;
      }
  };
  phi_obs(standard_phi4(1, 1.0, 0.0), FockSpace({200}));
  phi_obs(standard_phi4(2, 1.0, 0.5), FockSpace({30, 30}));
  Outcome o;
  o.pass = violations == 0 && rnd.rows.size() == 100;
  o.detail = std::to_string(rnd.rows.size()) + " random instances, " + std::to_string(observables) +
             " phi^m observables, violations=" + std::to_string(violations);
  return o;
}

Outcome criterion4() {
  struct Case {
    ModelSpec spec;
    std::vector<int> cutoffs;
  };
  std::vector<Case> cases{
      {standard_bose_hubbard(1, 0.0, 2.0), {12}},
      {standard_bose_hubbard(2, 1.0, 20.0), {12, 12}},
      {standard_bose_hubbard(2, 0.5, 12.0), {12, 12}},
      {standard_bose_hubbard(3, 1.0, 20.0), {8, 8, 8}},
      {standard_bose_hubbard(3, 0.8, 16.0, Boundary::Periodic), {8, 8, 8}},
      {standard_bose_hubbard(4, 1.0, 24.0), {6, 6, 6, 6}},
      {long_range_bose_hubbard(4, 4.0, 1.0, 12.0), {6, 6, 6, 6}},
  };
  int gated = 0, checked = 0;
  std::size_t violations = 0;
  for (auto& c : cases) {
    const FockSpace space(c.cutoffs);
    const auto sd = ground_state(build_hamiltonian(c.spec, space));
    const auto rep = bh_concentration_check(c.spec, space, sd);
    if (!rep.hypothesis_ok) {
      ++gated;
      continue;
    }
    ++checked;
    violations += rep.violations();
  }
  Outcome o;
  o.pass = checked >= 5 && violations == 0;
  o.detail = std::to_string(checked) + " configurations checked, " + std::to_string(gated) +
             " hypothesis-gated, violations=" + std::to_string(violations);
  return o;
}

Outcome criterion5() {
  const FockSpace s1({10000});
  const auto sd1 = solve_phi4_single(10000);
  const auto r1 = phi4_concentration_check(standard_phi4(1, 1.0, 0.0), s1, sd1);
  const auto chain = standard_phi4(2, 1.0, 0.5);
  const FockSpace s2({40, 40});
  const auto H2 = build_hamiltonian(chain, s2);
  const auto sd2 = ground_state(H2);
  const auto r2 = phi4_concentration_check(chain, s2, sd2);
  double mean = std::abs(phi_op(s1, 0).expectation(sd1.ground));
  for (int x = 0; x < 2; ++x) mean = std::max(mean, std::abs(phi_op(s2, x).expectation(sd2.ground)));
  Outcome o;
  o.pass = r1.passed() && r2.passed() && mean <= 1e-8;
  o.detail = std::string("single site ") + status_name(r1.status()) + ", L=2 chain " + status_name(r2.status()) +
             ", max |<phi>|=" + fmt("%.1e", mean);
  return o;
}

PipelineConfig pipeline_instance(double U, bool full) {
  PipelineConfig c;
  c.spec = long_range_bose_hubbard(6, 4.0, 1.0, U);
  c.ambient_cutoff = 4;
  c.schedule.eps0 = 0.1;
  c.schedule.a = 1.0;
  c.schedule.b = 2.0;
  c.q = 2;
  c.l = 2;
  c.degrees = {2, 4, 8, 16};
  if (full) {
    c.taus = {1.0, 2.0, 4.0, 8.0, 1e4};
    c.add_gated_taus = true;
  } else {
    c.taus = {1.0};
    c.add_gated_taus = false;
  }
  return c;
}

PipelineResult& main_pipeline() {
  static PipelineResult r = run_pipeline(pipeline_instance(4.0, true));
  return r;
}

Outcome criterion6() {
  std::vector<PipelineResult> runs;
  runs.push_back(main_pipeline());
  for (double U : {3.0, 5.0, 6.0, 8.0}) runs.push_back(run_pipeline(pipeline_instance(U, false)));
  int certs = 0, bad = 0;
  double worst_ratio = 0.0, worst_fix = 0.0;
  for (const auto& r : runs) {
    for (const auto& a : r.agsp) {
      ++certs;
      const bool ok = a.eps_K <= a.eps_bound * (1 + 1e-8) && a.fixes_ground <= 1e-8;
      if (!ok) ++bad;
      worst_ratio = std::max(worst_ratio, a.eps_K / a.eps_bound);
      worst_fix = std::max(worst_fix, a.fixes_ground);
    }
  }
  Outcome o;
  o.pass = runs.size() >= 5 && certs == 4 * static_cast<int>(runs.size()) && bad == 0;
  o.detail = std::to_string(runs.size()) + " instances, " + std::to_string(certs) +
             " certificates, max eps_K/bound=" + fmt("%.3f", worst_ratio) + ", max ||K Omega - Omega||=" +
             fmt("%.1e", worst_fix);
  return o;
}

Outcome criterion7() {
  const auto& r = main_pipeline();
  const auto& it = *r.it;
  const bool a = row_ok(it.report, "||H_bar - H_t|| <= truncation bound") && std::isfinite(r.pc.eta1) &&
                 std::isfinite(r.pc.eta2);
  const bool b = row_ok(it.report, "gap_bar - 2||dH|| <= gap_t");
  int gated = 0;
  bool c = true;
  for (const auto& ec : r.ecs) {
    c = c && row_ok(ec.report, "quadrature error of mu1") && row_ok(ec.report, "quadrature error of mu2");
    if (ec.eps1 * ec.eps1 <= 0.5) {
      ++gated;
      c = c && row_ok(ec.report, "displacement <= energy-cutoff bound");
    }
  }
  c = c && gated > 0 && r.pc.mu1.error <= 1e-6 * r.pc.mu1.value && r.pc.mu2.error <= 1e-6 * r.pc.mu2.value;
  Outcome o;
  o.pass = a && b && c;
  o.detail = std::string("(a) ") + (a ? "ok" : "FAIL") + " ||dH||=" + fmt("%.3e", it.dH_norm) + " eta1=" +
             fmt("%.3f", r.pc.eta1) + " eta2=" + fmt("%.3f", r.pc.eta2) + "; (b) " + (b ? "ok" : "FAIL") +
             " gap_t=" + fmt("%.4f", it.sd.gap) + "; (c) " + (c ? "ok" : "FAIL") + " on " + std::to_string(gated) +
             " gated tau";
  return o;
}

Outcome criterion8() {
  const auto spec = standard_bose_hubbard(6, 0.2, 4.0);
  const auto space = FockSpace::uniform(6, 3);
  const auto sd = ground_state(build_hamiltonian(spec, space));
  bool literal_global = true, literal_reduced = true, squared = true, all_cuts = true;
  int global_fail_at = 0;
  for (int D = 1; D <= 8; ++D) {
    const auto m = mps_compress(sd.ground, space, D);
    if (!row_ok(m.report, "||psi - M|| <= 2 sum delta")) {
      literal_global = false;
      if (!global_fail_at) global_fail_at = D;
    }
    literal_global = literal_global && row_ok(m.report, "||psi psi^+ - M M^+||_1");
    squared = squared && row_ok(m.report, "||psi - M||^2 <= 2 sum delta");
    for (int x = 0; x < 6; ++x) {
      literal_reduced = literal_reduced && m.reduced_error[x] <= 2.0 * (x + 1 < 6 ? m.delta[x] : 0.0) * (1 + 1e-9) + 1e-12;
      all_cuts = all_cuts && m.reduced_error[x] <= m.bound * (1 + 1e-9) + 1e-12;
    }
  }
  const std::size_t left = space.stride(3);
  const auto ey = eckart_young_check(sd.ground, left, space.dim() / left, 2, 50, 99);
  Outcome o;
  o.pass = literal_global && literal_reduced && ey.passed();
  o.known_failure = !o.pass && !literal_global && squared && all_cuts && ey.passed();
  o.detail = std::string("literal global ") + (literal_global ? "holds" : "fails from D=" + std::to_string(global_fail_at)) +
             ", literal reduced " + (literal_reduced ? "holds" : "fails") + ", squared global " +
             (squared ? "holds" : "fails") + ", reduced vs all cuts " + (all_cuts ? "holds" : "fails") +
             ", Eckart-Young " + status_name(ey.status());
  if (o.known_failure) o.detail += " [known: literal bounds are below the Eckart-Young floor]";
  return o;
}

Outcome criterion9() {
  struct Case {
    std::string name;
    ModelSpec spec;
    std::vector<int> cutoffs;
    oracle::Mat dense;
  };
  std::vector<Case> cases;
  cases.push_back({"bh L=2 N=10", standard_bose_hubbard(2, 1.0, 3.0), {10, 10}, oracle::bose_hubbard({10, 10}, 1.0, 3.0)});
  cases.push_back({"bh L=3 N=6", standard_bose_hubbard(3, 0.7, 2.0), {6, 6, 6}, oracle::bose_hubbard({6, 6, 6}, 0.7, 2.0)});
  cases.push_back({"bh ring L=4 N=4", standard_bose_hubbard(4, 1.0, 4.0, Boundary::Periodic), {4, 4, 4, 4},
                   oracle::bose_hubbard({4, 4, 4, 4}, 1.0, 4.0, true)});
  cases.push_back({"lr-bh L=4 N=5", long_range_bose_hubbard(4, 4.0, 1.0, 3.0), {5, 5, 5, 5},
                   oracle::long_range_bose_hubbard({5, 5, 5, 5}, 4.0, 1.0, 3.0)});
  cases.push_back({"bh mixed cutoffs", standard_bose_hubbard(3, 1.0, 2.5), {3, 7, 5}, oracle::bose_hubbard({3, 7, 5}, 1.0, 2.5)});
  cases.push_back({"phi4 L=1 N=40", standard_phi4(1, 1.0, 0.0), {40}, oracle::phi4({40}, 1.0, 0.0)});
  cases.push_back({"phi4 L=2 N=20", standard_phi4(2, 0.5, 0.5), {20, 20}, oracle::phi4({20, 20}, 0.5, 0.5)});
  cases.push_back({"phi4 ring L=3 N=8", standard_phi4(3, 1.0, 0.3, Boundary::Periodic), {8, 8, 8},
                   oracle::phi4({8, 8, 8}, 1.0, 0.3, true)});
  double worst_entry = 0.0, worst_eig = 0.0;
  for (const auto& c : cases) {
    const FockSpace space(c.cutoffs);
    const auto H = build_hamiltonian(c.spec, space);
    worst_entry = std::max(worst_entry, (H.dense() - c.dense).cwiseAbs().maxCoeff());
    EigenOptions o;
    o.force_krylov = true;
    o.n_eigs = 3;
    o.tol = 1e-12;
    const auto sd = ground_state(H, o);
    const auto ev = oracle::eigenvalues(c.dense);
    worst_eig = std::max(worst_eig, std::abs(sd.E0 - ev[0]));
    for (const auto& [val, res] : sd.low_eigs) {
      double best = 1e300;
      for (double e : ev) best = std::min(best, std::abs(val - e));
      worst_eig = std::max(worst_eig, best);
    }
  }
  Outcome o;
  o.pass = worst_entry <= 1e-12 && worst_eig <= 1e-10;
  o.detail = std::to_string(cases.size()) + " instances, max entry diff=" + fmt("%.1e", worst_entry) +
             ", max eigenvalue diff=" + fmt("%.1e", worst_eig);
  return o;
}

Outcome criterion10() {
  // basis-rotation invariance of the entropy under U_left (x) U_right
  const auto spec = standard_bose_hubbard(4, 0.5, 2.0);
  const auto space = FockSpace::uniform(4, 4);
  const auto sd = ground_state(build_hamiltonian(spec, space));
  const int cut = 2;
  const auto left = static_cast<Eigen::Index>(space.stride(cut));
  const auto right = static_cast<Eigen::Index>(space.dim()) / left;
  const double s0 = entropy(schmidt_decompose(sd.ground, space, cut));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  auto unitary = [&](Eigen::Index n) {
    CMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return CMat(Eigen::HouseholderQR<CMat>(a).householderQ());
  };
  double rot = 0.0;
  for (int t = 0; t < 5; ++t) {
    const Eigen::Map<const CMat> M(sd.ground.data(), left, right);
    const CMat R = unitary(left) * M * unitary(right).transpose();
    const Vec v = Eigen::Map<const Vec>(R.data(), R.size());
    rot = std::max(rot, std::abs(entropy(schmidt_decompose(v, space, cut)) - s0));
  }
  // subset energies on random repulsive instances
  int subset_ok = 0;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const int L = 3 + t % 2;
    auto rs = standard_bose_hubbard(L, 1.0, 1.0);
    for (auto& term : rs.terms)
      if (term.factors.size() == 2) term.coefficient = 2.0 * ud(rng) - 1.0;
    for (auto& u : rs.U) u = 0.5 + 3.0 * ud(rng);
    for (auto& term : rs.terms)
      if (term.factors.size() == 1) term.coefficient = -rs.U[term.factors[0].site];
    const auto sp = FockSpace::uniform(L, 4);
    std::vector<int> all, X;
    for (int x = 0; x < L; ++x) all.push_back(x);
    const int a = static_cast<int>(ud(rng) * L) % L;
    X.push_back(a);
    if (a + 1 < L && ud(rng) < 0.5) X.push_back(a + 1);
    if (subset_energy_check(rs, sp, X, all).passed()) ++subset_ok;
  }
  const auto rows = bh_entropy_sweep(4, 4, 1.0, {0.05, 0.1, 0.2, 0.4}, 2, area_law_params_bh(4));
  bool rows_ok = rows.size() == 4;
  for (const auto& r : rows) rows_ok = rows_ok && std::isfinite(r.entropy) && r.entropy >= 0.0;
  Outcome o;
  o.pass = rot <= 1e-9 && subset_ok == 10 && rows_ok;
  o.detail = "rotation max |dS|=" + fmt("%.1e", rot) + ", subset energy " + std::to_string(subset_ok) +
             "/10, sweep rows=" + std::to_string(rows.size()) + " (not asserted)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all_pass = true, expected = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
    expected = expected && (o.pass || o.known_failure);
  }
  std::printf("summary: %s\n", all_pass ? "all criteria pass"
                                         : (expected ? "only the known criterion 8 failure" : "unexpected failure"));
  return expected ? 0 : 1;
}
