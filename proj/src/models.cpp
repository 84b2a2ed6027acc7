#include "bosonwb/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace bw {

namespace {

int factor_degree(const Factor& f) {
  switch (f.kind) {
    case OpKind::N:
      return 2 * f.power;
    case OpKind::NPow:
      return 2 * f.power;
    default:
      return f.power;
  }
}

SpMat local_factor(const Factor& f, int cutoff) {
  const SpMat b = local_annihilation(cutoff);
  const SpMat bd = b.adjoint();
  SpMat base;
  int reps = f.power;
  switch (f.kind) {
    case OpKind::B:
      base = b;
      break;
    case OpKind::Bdag:
      base = bd;
      break;
    case OpKind::N:
      base = local_number(cutoff);
      break;
    case OpKind::NPow:
      base = local_number(cutoff);
      break;
    case OpKind::Phi:
      base = (b + bd) * cplx(1.0 / std::sqrt(2.0));
      break;
    case OpKind::Pi:
      base = (b - bd) * cplx(0.0, -1.0 / std::sqrt(2.0));
      break;
  }
  SpMat out(cutoff + 1, cutoff + 1);
  out.setIdentity();
  for (int r = 0; r < reps; ++r) out = out * base;
  return out;
}

Poly factor_poly(const Factor& f) {
  Poly base;
  switch (f.kind) {
    case OpKind::B:
      base = poly_b(f.site);
      break;
    case OpKind::Bdag:
      base = poly_bdag(f.site);
      break;
    case OpKind::N:
    case OpKind::NPow:
      base = poly_number(f.site);
      break;
    case OpKind::Phi:
      base = poly_phi(f.site);
      break;
    case OpKind::Pi:
      base = poly_pi(f.site);
      break;
  }
  return poly_pow(base, f.power);
}

TermSpec remap(const TermSpec& t, const std::map<int, int>& to_local) {
  TermSpec r = t;
  for (auto& f : r.factors) f.site = to_local.at(f.site);
  return r;
}

double site_distance(int i, int j, int L, Boundary b) {
  int d = std::abs(i - j);
  if (b == Boundary::Periodic) d = std::min(d, L - d);
  return d;
}

// Largest singular value of a dense matrix.
double spectral_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

int TermSpec::degree() const {
  int d = 0;
  for (const auto& f : factors) d += factor_degree(f);
  return d;
}

std::vector<int> TermSpec::support() const {
  std::set<int> s;
  for (const auto& f : factors) s.insert(f.site);
  return {s.begin(), s.end()};
}

Poly TermSpec::normal_ordered() const {
  Poly p = poly_constant(coefficient);
  for (const auto& f : factors) p = poly_mul(p, factor_poly(f));
  if (hermitian_conjugate_included) p = poly_add(p, poly_adjoint(p));
  return p;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::BoseHubbardClass:
      return "bose_hubbard";
    case Family::Phi4Class:
      return "phi4";
    case Family::Explicit:
      return "explicit";
  }
  return "explicit";
}

void ModelSpec::validate() const {
  if (n_sites < 1) throw std::invalid_argument("model needs at least one site");
  if (k < 1) throw std::invalid_argument("interaction degree k must be positive");
  for (const auto& t : terms) {
    if (t.factors.empty()) throw std::invalid_argument("term without factors");
    for (const auto& f : t.factors) {
      if (f.site < 0 || f.site >= n_sites) throw std::out_of_range("term site index out of range");
      if (f.power < 1) throw std::invalid_argument("factor power must be >= 1");
    }
    if (t.degree() > k)
      throw std::invalid_argument("term degree " + std::to_string(t.degree()) + " exceeds k=" + std::to_string(k));
  }
  if (family == Family::BoseHubbardClass) {
    if (static_cast<int>(U.size()) != n_sites) throw std::invalid_argument("need one U_i per site");
    if (k % 2 != 0) throw std::invalid_argument("Bose-Hubbard class needs even k");
    for (double u : U)
      if (!(u > 0.0)) throw std::invalid_argument("Bose-Hubbard class needs U_i > 0");
  }
  if (family == Family::Phi4Class) {
    if (static_cast<int>(mu.size()) != n_sites) throw std::invalid_argument("need one mu_i per site");
    for (double m : mu)
      if (!(m > 0.0)) throw std::invalid_argument("phi4 class needs mu_i > 0");
    if (!parity_symmetric()) throw std::invalid_argument("phi4 class potential must be even in phi");
  }
}

bool ModelSpec::parity_symmetric() const {
  for (const auto& t : terms) {
    int odd = 0;
    for (const auto& f : t.factors) {
      if (f.kind == OpKind::Phi || f.kind == OpKind::Pi || f.kind == OpKind::B || f.kind == OpKind::Bdag)
        odd += f.power;
    }
    if (odd % 2 != 0) return false;
  }
  return true;
}

std::vector<TermSpec> ModelSpec::expanded_terms() const {
  std::vector<TermSpec> out = terms;
  if (family == Family::BoseHubbardClass) {
    for (int i = 0; i < n_sites; ++i) out.push_back(TermSpec{U.at(i), {{i, OpKind::NPow, k / 2}}, false, Sector::H0});
  }
  if (family == Family::Phi4Class) {
    for (int i = 0; i < n_sites; ++i) out.push_back(TermSpec{mu.at(i), {{i, OpKind::Pi, 2}}, false, Sector::H0});
  }
  return out;
}

ModelSpec standard_bose_hubbard(int L, double J, double U, Boundary boundary) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  ModelSpec s;
  s.family = Family::BoseHubbardClass;
  s.n_sites = L;
  s.k = 4;
  s.boundary = boundary;
  s.name = "bose_hubbard";
  s.U.assign(L, U);
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic && L > 2) bonds.emplace_back(L - 1, 0);
  for (auto [i, j] : bonds)
    if (J != 0.0) s.terms.push_back(TermSpec{J, {{i, OpKind::B}, {j, OpKind::Bdag}}, true, Sector::H0});
  // U n(n-1) = U n^2 - U n; the n^2 part is the implied repulsion.
  for (int i = 0; i < L; ++i) s.terms.push_back(TermSpec{-U, {{i, OpKind::N}}, false, Sector::H0});
  return s;
}

ModelSpec standard_phi4(int L, double lambda, double gamma, Boundary boundary) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  ModelSpec s;
  s.family = Family::Phi4Class;
  s.n_sites = L;
  s.k = 4;
  s.boundary = boundary;
  s.name = "phi4";
  s.mu.assign(L, 1.0);
  for (int i = 0; i < L; ++i) {
    s.terms.push_back(TermSpec{1.0, {{i, OpKind::Phi, 2}}, false, Sector::H0});
    if (lambda != 0.0) s.terms.push_back(TermSpec{lambda, {{i, OpKind::Phi, 4}}, false, Sector::H0});
  }
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic && L > 2) bonds.emplace_back(L - 1, 0);
  for (auto [i, j] : bonds)
    if (gamma != 0.0) s.terms.push_back(TermSpec{gamma, {{i, OpKind::Phi}, {j, OpKind::Phi}}, false, Sector::H0});
  return s;
}

double decay_profile(double r, double alpha_bar) { return 1.0 / ((r * r + 1.0) * (std::pow(r, alpha_bar) + 1.0)); }

double long_range_hopping(double r, double alpha, double J0) { return J0 * decay_profile(r, alpha - 2.0); }

ModelSpec long_range_bose_hubbard(int L, double alpha, double J0, double U) {
  if (!(alpha > 2.0)) throw std::invalid_argument("long-range exponent must exceed 2");
  ModelSpec s = standard_bose_hubbard(L, 0.0, U);
  s.name = "long_range_bose_hubbard";
  s.long_range = LongRange{alpha, J0};
  std::vector<TermSpec> hops;
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      hops.push_back(TermSpec{long_range_hopping(j - i, alpha, J0), {{i, OpKind::B}, {j, OpKind::Bdag}}, true, Sector::H0});
  s.terms.insert(s.terms.begin(), hops.begin(), hops.end());
  return s;
}

SparseOperator term_operator(const TermSpec& term, const FockSpace& space) {
  std::map<int, std::vector<Factor>> by_site;
  for (const auto& f : term.factors) {
    if (f.site < 0 || f.site >= space.n_sites()) throw std::out_of_range("term site index out of range");
    by_site[f.site].push_back(f);
  }
  SparseOperator op = identity_op(space);
  for (const auto& [site, fs] : by_site) {
    int d = 0;
    for (const auto& f : fs) d += factor_degree(f);
    const int cut = space.cutoff(site);
    const int big = cut + d;
    SpMat local(big + 1, big + 1);
    local.setIdentity();
    for (const auto& f : fs) local = local * local_factor(f, big);
    // crop: matrix elements between states within the cutoff are exact
    SpMat cropped = local.topLeftCorner(cut + 1, cut + 1);
    op = compose(op, embed(cropped, space, site));
  }
  op.mat *= term.coefficient;
  if (term.hermitian_conjugate_included) op.mat = op.mat + SpMat(op.mat.adjoint());
  op.mat.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0); });
  op.hermitian = false;
  return op;
}

SparseOperator build_hamiltonian_filtered(const ModelSpec& spec, const FockSpace& space,
                                          const std::function<bool(const std::vector<int>&)>& keep) {
  spec.validate();
  if (spec.n_sites != space.n_sites()) throw std::invalid_argument("model and space have different site counts");
  SpMat h(space.dim(), space.dim());
  for (const auto& t : spec.expanded_terms()) {
    if (!keep(t.support())) continue;
    h += term_operator(t, space).mat;
  }
  // exact Hermitian symmetrization removes assembly roundoff
  h = (h + SpMat(h.adjoint())) * cplx(0.5);
  h.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0); });
  h.makeCompressed();
  SparseOperator H{std::move(h), true, spec.name.empty() ? "H" : spec.name};
  return H;
}

SparseOperator build_hamiltonian(const ModelSpec& spec, const FockSpace& space) {
  return build_hamiltonian_filtered(spec, space, [](const std::vector<int>&) { return true; });
}

SparseOperator region_hamiltonian(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& region,
                                  bool reduced) {
  if (region.empty()) throw std::invalid_argument("empty region");
  std::set<int> reg(region.begin(), region.end());
  for (int s : reg)
    if (s < 0 || s >= spec.n_sites) throw std::out_of_range("region site out of range");
  auto inside = [&](const std::vector<int>& sup) {
    return std::all_of(sup.begin(), sup.end(), [&](int s) { return reg.count(s) > 0; });
  };
  if (!reduced) return build_hamiltonian_filtered(spec, space, inside);
  std::map<int, int> to_local;
  std::vector<int> cut;
  for (int s : reg) {
    to_local[s] = static_cast<int>(cut.size());
    cut.push_back(space.cutoff(s));
  }
  const FockSpace sub(cut);
  spec.validate();
  SpMat h(sub.dim(), sub.dim());
  for (const auto& t : spec.expanded_terms())
    if (inside(t.support())) h += term_operator(remap(t, to_local), sub).mat;
  h = (h + SpMat(h.adjoint())) * cplx(0.5);
  h.makeCompressed();
  return {std::move(h), true, "H_region"};
}

SparseOperator support_operator(const std::vector<TermSpec>& terms, const std::vector<int>& support,
                                const FockSpace& space) {
  std::map<int, int> to_local;
  std::vector<int> cut;
  for (int s : support) {
    to_local[s] = static_cast<int>(cut.size());
    cut.push_back(space.cutoff(s));
  }
  const FockSpace sub(cut);
  SpMat h(sub.dim(), sub.dim());
  for (const auto& t : terms) h += term_operator(remap(t, to_local), sub).mat;
  h = (h + SpMat(h.adjoint())) * cplx(0.5);
  h.makeCompressed();
  return {std::move(h), true, "h_Z"};
}

std::vector<std::pair<std::vector<int>, std::vector<TermSpec>>> group_by_support(const ModelSpec& spec) {
  std::map<std::vector<int>, std::vector<TermSpec>> g;
  for (const auto& t : spec.expanded_terms()) g[t.support()].push_back(t);
  return {g.begin(), g.end()};
}

ModelConstants extract_constants(const ModelSpec& spec, int g_probe_max) {
  spec.validate();
  ModelConstants c;
  const int L = spec.n_sites;
  c.k = spec.k;
  c.U = spec.U;
  c.mu = spec.mu;
  c.g_probe_max = g_probe_max;
  c.J_bar.assign(L, std::vector<double>(spec.k + 1, 0.0));
  c.J_bar_max.assign(spec.k + 1, 0.0);
  c.v_bar.assign(spec.k / 2 + 1, 0.0);

  const bool phi4 = spec.family == Family::Phi4Class;
  if (!phi4) {
    Poly h0;
    for (const auto& t : spec.terms)
      if (t.sector == Sector::H0) h0 = poly_add(h0, t.normal_ordered());
    for (const auto& [m, coef] : h0) {
      const int d = mono_degree(m);
      if (d < 1 || d > spec.k) continue;
      for (int i = 0; i < L; ++i)
        if (mono_touches(m, i)) c.J_bar[i][d] += std::abs(coef);
    }
  }
  for (int d = 0; d <= spec.k; ++d)
    for (int i = 0; i < L; ++i) c.J_bar_max[d] = std::max(c.J_bar_max[d], c.J_bar[i][d]);
  for (int i = 0; i < L; ++i) {
    double s = 0.0;
    for (int k1 = 1; k1 <= spec.k; ++k1) s += c.J_bar[i][k1] * (1.0 + std::pow(2.0 * k1, k1));
    c.J_cal = std::max(c.J_cal, s);
  }

  std::vector<std::vector<double>> v(L, std::vector<double>(spec.k / 2 + 1, 0.0));
  std::vector<double> f(L, 0.0);
  for (const auto& t : spec.terms) {
    const auto sup = t.support();
    if (t.sector == Sector::Vplus) {
      int k1 = 0;
      for (const auto& fa : t.factors) k1 += fa.power;
      if (k1 <= spec.k / 2)
        for (int i : sup) v[i][k1] += std::abs(t.coefficient);
    }
    if (phi4)
      for (int i : sup) f[i] += std::abs(t.coefficient);
  }
  for (int k1 = 0; k1 <= spec.k / 2; ++k1)
    for (int i = 0; i < L; ++i) c.v_bar[k1] = std::max(c.v_bar[k1], v[i][k1]);
  for (int i = 0; i < L; ++i) c.f_bar = std::max(c.f_bar, f[i]);
  for (double m : spec.mu) c.mu_bar = std::max(c.mu_bar, m);
  c.f_bar_prime = std::max(c.f_bar, c.mu_bar / 2.0);

  c.repulsive.assign(L, true);
  if (spec.family == Family::BoseHubbardClass)
    for (int i = 0; i < L; ++i) c.repulsive[i] = spec.U[i] > 5.0 * c.J_bar[i][spec.k];

  // J_Z = max_N ||h_Z P_{<=N}|| / N^{k/2}, probed on a local space with cutoff N + k.
  c.alpha_bar = spec.long_range ? spec.long_range->alpha - 2.0 : 2.0;
  std::map<std::vector<int>, double> JZ;
  for (const auto& [sup, ts] : group_by_support(spec)) {
    std::map<int, int> to_local;
    for (std::size_t a = 0; a < sup.size(); ++a) to_local[sup[a]] = static_cast<int>(a);
    double best = 0.0;
    for (int N = 1; N <= g_probe_max; ++N) {
      const double cols = std::pow(N + 1.0, static_cast<double>(sup.size()));
      const double rows = std::pow(N + 1.0 + spec.k, static_cast<double>(sup.size()));
      if (N > 1 && (cols > 400.0 || rows * cols > 5e6)) break;
      const FockSpace loc = FockSpace::uniform(static_cast<int>(sup.size()), N + spec.k);
      SpMat hz(loc.dim(), loc.dim());
      for (const auto& t : ts) hz += term_operator(remap(t, to_local), loc).mat;
      std::vector<Eigen::Index> keep;
      for (std::size_t i = 0; i < loc.dim(); ++i) {
        bool in = true;
        for (int x = 0; x < loc.n_sites(); ++x) in = in && loc.occupation(i, x) <= N;
        if (in) keep.push_back(static_cast<Eigen::Index>(i));
      }
      const CMat dense = CMat(hz);
      CMat restricted(dense.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t j = 0; j < keep.size(); ++j) restricted.col(j) = dense.col(keep[j]);
      best = std::max(best, spectral_norm(restricted) / std::pow(N, spec.k / 2.0));
    }
    JZ[sup] = best;
  }
  for (int i = 0; i < L; ++i) {
    for (int j = i; j < L; ++j) {
      double s = 0.0;
      for (const auto& [sup, val] : JZ)
        if (std::count(sup.begin(), sup.end(), i) && std::count(sup.begin(), sup.end(), j)) s += val;
      if (i == j) c.g_onsite = std::max(c.g_onsite, s);
      const double d = site_distance(i, j, L, spec.boundary);
      c.g = std::max(c.g, s / decay_profile(d, c.alpha_bar));
    }
  }
  return c;
}

}  // namespace bw
