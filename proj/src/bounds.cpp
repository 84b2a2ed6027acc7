#include "bosonwb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>

#include "bosonwb/coefficients.hpp"
#include "bosonwb/kernels.hpp"

namespace bw {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// residuals r_j = log c - b N_j^{ia} - log p_j, parameters (log c, b, ia)
struct TailFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  Eigen::VectorXd n, logp;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(n.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    for (Eigen::Index j = 0; j < n.size(); ++j) f[j] = x[0] - x[1] * std::pow(n[j], x[2]) - logp[j];
    return 0;
  }
  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
    for (Eigen::Index j = 0; j < n.size(); ++j) {
      const double p = std::pow(n[j], x[2]);
      J(j, 0) = 1.0;
      J(j, 1) = -p;
      J(j, 2) = n[j] > 0 ? -x[1] * p * std::log(n[j]) : 0.0;
    }
    return 0;
  }
};

// Least squares for (log c, b) at fixed ia; returns the residual sum of squares.
double linear_fit(const Eigen::VectorXd& n, const Eigen::VectorXd& logp, double ia, double& logc, double& b) {
  Eigen::MatrixXd A(n.size(), 2);
  for (Eigen::Index j = 0; j < n.size(); ++j) {
    A(j, 0) = 1.0;
    A(j, 1) = -std::pow(n[j], ia);
  }
  const Eigen::Vector2d sol = A.colPivHouseholderQr().solve(logp);
  logc = sol[0];
  b = sol[1];
  return (A * sol - logp).squaredNorm();
}

cplx inner(const Vec& a, const Vec& b) { return a.dot(b); }

}  // namespace

double tail_probability(const Vec& psi, const FockSpace& space, int site, int N) {
  if (site < 0 || site >= space.n_sites()) throw std::out_of_range("tail_probability: site out of range");
  if (N < 0 || N > space.cutoff(site)) throw std::out_of_range("tail_probability: N beyond the cutoff");
  return kernels::tail_sum(space, psi, site, N) / psi.squaredNorm();
}

TailCurve tail_curve(const Vec& psi, const FockSpace& space, int site) {
  const auto dist = kernels::occupation_distribution(space, psi, site);
  const double total = psi.squaredNorm();
  TailCurve out;
  double above = 0.0;
  std::vector<double> tail(dist.size(), 0.0);
  for (int n = static_cast<int>(dist.size()) - 1; n >= 0; --n) {
    tail[n] = above;
    above += dist[n];
  }
  for (int N = 0; N + 1 < static_cast<int>(dist.size()); ++N) out.emplace_back(N, tail[N] / total);
  return out;
}

double ConcentrationFit::operator()(double N) const { return c * std::exp(-b * std::pow(N, 1.0 / a)); }

TailCurve fit_window(const TailCurve& curve, double floor) {
  for (std::size_t j = 0; j + 1 < curve.size(); ++j)
    if (curve[j + 1].second > curve[j].second * (1.0 + 1e-9) + 1e-300)
      throw std::invalid_argument("fit_concentration: tail increases at N=" + std::to_string(curve[j + 1].first) +
                                  "; input is not a tail curve of a single state");
  TailCurve out;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double p = curve[j].second;
    if (!(p > floor)) continue;
    const bool last = j + 1 == curve.size();
    if (last || curve[j + 1].second < p * (1.0 - 1e-6)) out.push_back(curve[j]);
  }
  return out;
}

ConcentrationFit fit_concentration(const TailCurve& curve, double floor) {
  const TailCurve pts = fit_window(curve, floor);
  if (pts.size() < 5)
    throw std::invalid_argument("fit_concentration: " + std::to_string(pts.size()) +
                                " points above the floor, need at least 5");
  TailFunctor f;
  f.n.resize(pts.size());
  f.logp.resize(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    f.n[j] = pts[j].first;
    f.logp[j] = std::log(pts[j].second);
  }
  double best = INFINITY, best_ia = 1.0, logc = 0.0, b = 0.0;
  for (double ia = 0.05; ia <= 4.0 + 1e-12; ia += 0.01) {
    double lc, bb;
    const double r = linear_fit(f.n, f.logp, ia, lc, bb);
    if (r < best) {
      best = r;
      best_ia = ia;
      logc = lc;
      b = bb;
    }
  }
  Eigen::VectorXd x(3);
  x << logc, b, best_ia;
  Eigen::LevenbergMarquardt<TailFunctor> lm(f);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 20000;
  lm.minimize(x);
  Eigen::VectorXd res(pts.size());
  f(x, res);
  if (!(x[2] > 0.0) || !std::isfinite(res.squaredNorm()) || res.squaredNorm() > best * (1.0 + 1e-12)) {
    // keep the grid optimum if the refinement wandered off
    x << logc, b, best_ia;
    f(x, res);
  }
  ConcentrationFit fit;
  fit.c = std::exp(x[0]);
  fit.b = x[1];
  fit.a = 1.0 / x[2];
  fit.floor = floor;
  fit.points = pts.size();
  fit.n_min = pts.front().first;
  fit.n_max = pts.back().first;
  fit.residual = std::sqrt(res.squaredNorm() / static_cast<double>(pts.size()));
  return fit;
}

double bh_decay_base(double zeta) {
  if (zeta <= 0.0) return 0.0;
  if (zeta > 0.25) return NAN;
  return (1.0 - std::sqrt(1.0 - 16.0 * zeta * zeta)) / (4.0 * zeta);
}

BhBoundConstants bh_bound_constants(const ModelConstants& mc, const std::optional<std::vector<double>>& u) {
  BhBoundConstants out;
  out.k = mc.k;
  out.J_cal = mc.J_cal;
  out.J_check = 2.0 * mc.J_cal;
  const double k = mc.k;
  const double Jc = out.J_check;
  for (std::size_t i = 0; i < mc.U.size(); ++i) {
    BhSiteConstants s;
    s.site = static_cast<int>(i);
    s.U = mc.U[i];
    s.J_bar_k = mc.J_bar[i][mc.k];
    s.repulsive = s.U > 5.0 * s.J_bar_k;
    s.u = u ? u->at(i) : (s.U - 5.0 * s.J_bar_k) / 2.0;
    if (s.J_bar_k == 0.0) {
      s.corollary = true;
      s.zeta = 0.0;
      s.base = std::exp(-1.0);
      s.M = std::max(std::pow(2.0, 2.0 / k) * std::pow(Jc / s.U, 2.0), std::pow((16.0 * mc.J_cal + Jc) / s.U, 2.0));
    } else {
      const double denom = s.U - s.u - s.J_bar_k;
      s.zeta = s.J_bar_k / denom;
      s.base = bh_decay_base(s.zeta);
      const double t1 = std::pow(2.0, 2.0 / k) * std::pow(Jc / (s.U - s.J_bar_k), 2.0);
      const double t2 = std::pow((Jc * s.J_bar_k + 2.0 * mc.J_cal * denom) / (s.u * s.J_bar_k), 2.0);
      s.M = std::max(t1, t2);
    }
    out.sites.push_back(s);
  }
  return out;
}

double bh_tail_bound(const BhSiteConstants& s, int k, double x) { return std::pow(s.base, 2.0 * (x - s.M) / k); }

CheckReport bh_concentration_check(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd,
                                   const std::optional<std::vector<double>>& u) {
  CheckReport rep;
  rep.name = "bh_concentration";
  if (spec.family != Family::BoseHubbardClass) {
    rep.refuse("not a Bose-Hubbard class model");
    return rep;
  }
  const auto mc = extract_constants(spec);
  const auto bc = bh_bound_constants(mc, u);
  rep.extra["J_check"] = bc.J_check;
  rep.extra["J_cal"] = bc.J_cal;
  for (const auto& s : bc.sites) {
    const std::string tag = "site " + std::to_string(s.site);
    nlohmann::json js{{"site", s.site}, {"U", s.U},       {"J_bar_k", s.J_bar_k}, {"u", s.u},
                      {"zeta", s.zeta}, {"M", s.M},       {"base", s.base},       {"corollary", s.corollary}};
    rep.extra["sites"].push_back(js);
    if (!(s.U > 0.0)) {
      rep.refuse(tag + ": U_i must be positive");
      continue;
    }
    if (!s.corollary) {
      if (!s.repulsive) {
        rep.refuse(tag + ": repulsive condition U_i > 5 J_bar_{i,k} violated");
        continue;
      }
      if (!(s.u > 0.0) || !(s.zeta > 0.0) || !(s.zeta < 0.25)) {
        rep.refuse(tag + ": zeta_{i,0} = " + num(s.zeta) + " is not in (0, 1/4) for u_i = " + num(s.u));
        continue;
      }
    }
    for (int x = 0; x <= space.cutoff(s.site); ++x) {
      const double p = tail_probability(sd.ground, space, s.site, x);
      rep.add(tag + " x=" + std::to_string(x), p, bh_tail_bound(s, mc.k, x), 1e-8, 1e-14);
    }
  }
  return rep;
}

Phi4BoundConstants phi4_bound_constants(const ModelConstants& mc, double gap, double max_abs_phi_value) {
  Phi4BoundConstants c;
  c.k = mc.k;
  c.mu_bar = mc.mu_bar;
  c.f_bar_prime = mc.f_bar_prime;
  c.gap = gap;
  c.max_phi = max_abs_phi_value;
  c.c1_check = 2.0 * max_abs_phi_value + 4.0 * std::sqrt(c.mu_bar / gap) + 1.0;
  c.C_tilde = c.c1_check * c.k * c.k * std::pow(c.f_bar_prime / c.mu_bar, 1.0 / c.k);
  return c;
}

double phi4_tail_bound(const Phi4BoundConstants& c, double x) {
  const double k = c.k;
  return 4.0 * std::exp(k) * std::exp(-k * std::pow(x, 1.0 / k) / (8.0 * std::exp(1.0) * c.C_tilde));
}

double max_abs_phi(const FockSpace& space, const Vec& psi) {
  double m = 0.0;
  for (int i = 0; i < space.n_sites(); ++i)
    m = std::max(m, std::abs(phi_op(space, i).expectation(psi)) / psi.squaredNorm());
  return m;
}

CheckReport phi4_concentration_check(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd) {
  CheckReport rep;
  rep.name = "phi4_concentration";
  if (spec.family != Family::Phi4Class) {
    rep.refuse("not a phi4 class model");
    return rep;
  }
  if (!spec.parity_symmetric()) rep.refuse("parity symmetry violated by the term list");
  if (sd.degenerate || !(sd.gap > 0.0)) rep.refuse("degenerate ground state");
  const double phi = max_abs_phi(space, sd.ground);
  rep.extra["max_abs_phi"] = phi;
  if (phi > 1e-8) rep.refuse("measured |<phi>| = " + num(phi) + " exceeds 1e-8");
  if (!rep.hypothesis_ok) return rep;
  const auto mc = extract_constants(spec);
  const auto c = phi4_bound_constants(mc, sd.gap, 0.0);
  rep.extra["C_tilde"] = c.C_tilde;
  rep.extra["c1_check"] = c.c1_check;
  rep.extra["gap"] = c.gap;
  for (int i = 0; i < space.n_sites(); ++i) {
    const auto curve = tail_curve(sd.ground, space, i);
    double worst = -INFINITY;
    for (const auto& [x, p] : curve) {
      const double bound = phi4_tail_bound(c, x);
      if (p > bound * (1 + 1e-8)) rep.add("site " + std::to_string(i) + " x=" + std::to_string(x), p, bound);
      worst = std::max(worst, p - bound);
    }
    rep.add("site " + std::to_string(i) + " max_x (tail - bound) over " + std::to_string(curve.size()) + " x", worst,
            0.0, 0.0, 1e-14);
  }
  return rep;
}

TradeoffValues tradeoff_values(const LinearOperator& h, const SpectralData& sd, const LinearOperator& o) {
  const Vec& g = sd.ground;
  Vec a, ha;
  o.apply(g, a);
  h.apply(a, ha);
  const double mean = std::real(inner(g, a));
  const double o2 = a.squaredNorm();
  TradeoffValues t;
  t.variance = o2 - mean * mean;
  t.gap = sd.gap;
  t.lhs = t.variance * t.gap;
  t.rhs = 0.5 * std::abs(2.0 * sd.E0 * o2 - 2.0 * std::real(inner(a, ha)));
  return t;
}

CheckReport tradeoff_check(const LinearOperator& h, const SpectralData& sd, const LinearOperator& o,
                           const std::string& label) {
  CheckReport rep;
  rep.name = "tradeoff";
  if (sd.degenerate || !(sd.gap > 0.0)) {
    rep.refuse("degenerate ground state");
    return rep;
  }
  const auto t = tradeoff_values(h, sd, o);
  rep.extra["variance"] = t.variance;
  rep.extra["gap"] = t.gap;
  rep.add(label + ": Var(O) * gap", t.lhs, t.rhs, 1e-8, 1e-12);
  return rep;
}

CheckReport random_tradeoff_check(int instances, int max_dim, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "tradeoff_random";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(2, std::max(2, max_dim));
  std::normal_distribution<double> nd;
  auto herm = [&](int n) {
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return CMat(0.5 * (a + a.adjoint()));
  };
  int refused = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < instances; ++t) {
    const int n = dim_dist(rng);
    const CMat h = herm(n);
    const CMat o = herm(n);
    const auto sd = dense_lowest(h, EigenOptions{});
    if (sd.degenerate || !(sd.gap > 1e-8)) {
      ++refused;
      continue;
    }
    const auto v = tradeoff_values(as_linear(h), sd, as_linear(o));
    worst = std::max(worst, v.lhs / v.rhs);
    rep.add("instance " + std::to_string(t) + " dim " + std::to_string(n), v.lhs, v.rhs, 1e-8, 1e-12);
  }
  rep.extra["instances"] = instances;
  rep.extra["refused"] = refused;
  rep.extra["worst_ratio"] = worst;
  return rep;
}

CheckReport phi_double_commutator_check(int m_max, double tol) {
  CheckReport rep;
  rep.name = "phi_double_commutator";
  for (int m = 1; m <= m_max; ++m) {
    const int margin = 2 * m + 2;
    const FockSpace space({margin + 6});
    const auto phim = power(phi_op(space, 0), m);
    const auto pi2 = power(pi_op(space, 0), 2);
    const auto dc = commutator(commutator(pi2, phim), phim);
    const auto target = scaled(power(phi_op(space, 0), 2 * m - 2), -2.0 * m * m);
    const double dev = max_abs_restricted(linear_combination(1.0, dc, -1.0, target), interior_projector(space, margin));
    rep.add("m=" + std::to_string(m), dev, tol, 0.0);
  }
  return rep;
}

CheckReport moment_suite(const ModelSpec& spec, const FockSpace& space, const SpectralData& sd, int s_max) {
  CheckReport rep;
  rep.name = "moments";
  const auto mc = extract_constants(spec);
  const Vec& g = sd.ground;
  const int L = space.n_sites();
  if (spec.family == Family::Phi4Class) {
    if (sd.degenerate || !(sd.gap > 0.0)) {
      rep.refuse("degenerate ground state");
      return rep;
    }
    const double phi1 = max_abs_phi(space, g);
    const auto c = phi4_bound_constants(mc, sd.gap, phi1);
    rep.extra["C_tilde"] = c.C_tilde;
    rep.extra["c1_check"] = c.c1_check;
    const bool parity = spec.parity_symmetric();
    for (int i = 0; i < L; ++i) {
      const auto phi = phi_op(space, i);
      const auto pi = pi_op(space, i);
      const auto dist = kernels::occupation_distribution(space, g, i);
      const std::string tag = "site " + std::to_string(i);
      Vec vphi = g, vpi = g;
      for (int s = 1; s <= s_max; ++s) {
        vphi = phi.apply(vphi);
        vpi = pi.apply(vpi);
        const double mphi = std::abs(inner(g, vphi));
        const double mpi = std::abs(inner(g, vpi));
        double mn = 0.0;
        for (std::size_t n = 0; n < dist.size(); ++n) mn += dist[n] * std::pow(static_cast<double>(n), s);
        const std::string ss = " s=" + std::to_string(s);
        const double bphi = std::pow((phi1 + 2.0 * std::sqrt(c.mu_bar / c.gap)) * s, s);
        const double bpi = std::pow(c.f_bar_prime / c.mu_bar * std::pow(c.c1_check * c.k * c.k * s, c.k), s / 2.0);
        const double bn = 4.0 * std::pow(8.0 * c.C_tilde * s, c.k * s / 2.0);
        rep.add(tag + ss + " |<phi^s>|", mphi, bphi);
        rep.add(tag + ss + " |<pi^s>|", mpi, bpi);
        rep.add(tag + ss + " <n^s>", mn, bn);
        if (parity && s % 2 == 1) rep.add(tag + ss + " odd |<phi^s>| (parity)", mphi, 1e-8, 0.0);
      }
    }
    return rep;
  }
  if (spec.family == Family::BoseHubbardClass) {
    const auto bc = bh_bound_constants(mc);
    double q_meas = 0.0, q_bound = 1.0;
    bool ok = true;
    for (int i = 0; i < L; ++i) {
      const double gapU = spec.U[i] - mc.J_bar[i][mc.k];
      if (!(gapU > 0.0) || !bc.sites[i].repulsive) {
        rep.refuse("site " + std::to_string(i) + ": repulsive condition violated");
        ok = false;
        continue;
      }
      const auto dist = kernels::occupation_distribution(space, g, i);
      double m = 0.0;
      for (std::size_t n = 0; n < dist.size(); ++n) m += dist[n] * std::pow(static_cast<double>(n), mc.k / 2.0);
      q_meas = std::max(q_meas, std::pow(m, 2.0 / mc.k));
      q_bound = std::max(q_bound, std::pow(2.0 * mc.J_cal / gapU, 2.0));
      rep.add("site " + std::to_string(i) + " <n^{k/2}>", m, std::pow(bc.J_check / gapU, mc.k));
    }
    if (ok) rep.add("Q_Omega", q_meas, q_bound);
    return rep;
  }
  rep.refuse("moment bounds need a Bose-Hubbard or phi4 class model");
  return rep;
}

CheckReport hopping_inequality_check(const FockSpace& space, const std::vector<int>& sites, int split) {
  CheckReport rep;
  rep.name = "hopping_inequality";
  const int k = static_cast<int>(sites.size());
  if (k < 1 || split < 0 || split > k) throw std::invalid_argument("hopping_inequality_check: bad split");
  if (space.dim() > kDenseProjectorBudget) throw std::length_error("hopping_inequality_check: dense budget exceeded");
  SparseOperator B = identity_op(space);
  for (int j = 0; j < k; ++j) {
    const auto op = j < split ? annihilation_op(space, sites[j]) : creation_op(space, sites[j]);
    B = compose(op, B);
  }
  const CMat b = B.dense();
  const DenseEig es = dense_eigh(b.adjoint() * b);
  const Eigen::VectorXd sq = es.values.cwiseMax(0.0).cwiseSqrt();
  const CMat absB = es.vectors * sq.asDiagonal() * es.vectors.adjoint();
  CMat rhs = CMat::Zero(space.dim(), space.dim());
  for (std::size_t idx = 0; idx < space.dim(); ++idx) {
    double v = 1.0;
    for (int s : sites) v *= std::sqrt(space.occupation(idx, s) + static_cast<double>(k));
    rhs(idx, idx) = v;
  }
  const double min_eig = dense_eigh(rhs - absB).values.minCoeff();
  rep.add("-min eig(rhs - |B|)", -min_eig, 1e-8, 0.0);
  return rep;
}

std::vector<double> sequence_lemma_oracle(const std::vector<double>& x, double zeta, double a0, std::uint64_t seed) {
  const std::size_t n = x.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(1.0, 10.0);
  std::vector<double> y(n + 1, 0.0);  // y_m = x_m a_m, y_{n} = 0 beyond the last index
  y[0] = x[0] * a0;
  for (std::size_t m = 1; m < n; ++m) y[m] = U(rng) * y[0] * 10.0;
  for (int it = 0; it < 2000000; ++it) {
    double change = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
      const double v = zeta * (y[m - 1] + y[m + 1]);
      change = std::max(change, std::abs(v - y[m]));
      y[m] = v;
    }
    if (change <= 1e-16 * y[0]) break;
  }
  std::vector<double> a(n);
  for (std::size_t m = 0; m < n; ++m) a[m] = y[m] / x[m];
  return a;
}

CheckReport sequence_lemma_check(const std::vector<double>& x, double zeta, int trials, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "sequence_lemma";
  if (!(zeta > 0.0 && zeta <= 0.5)) {
    rep.refuse("zeta must lie in (0, 1/2]");
    return rep;
  }
  for (double v : x)
    if (!(v > 0.0)) {
      rep.refuse("x must be strictly positive");
      return rep;
    }
  const double r = (1.0 - std::sqrt(1.0 - 4.0 * zeta * zeta)) / (2.0 * zeta);
  const std::size_t n = x.size();
  // exact saturating solution of the tridiagonal system, y_0 = x_0
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n - 1, n - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
  for (std::size_t m = 1; m < n; ++m) {
    T(m - 1, m - 1) = 1.0;
    if (m >= 2) T(m - 1, m - 2) = -zeta;
    if (m + 1 < n) T(m - 1, m) = -zeta;
  }
  rhs[0] = zeta * x[0];
  const Eigen::VectorXd ysol = T.partialPivLu().solve(rhs);
  double oracle_dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto a = sequence_lemma_oracle(x, zeta, 1.0, seed + static_cast<std::uint64_t>(t));
    double worst = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
      const double bound = std::pow(r, static_cast<double>(m)) * x[0] / x[m];
      worst = std::max(worst, a[m] / bound);
      oracle_dev = std::max(oracle_dev, std::abs(a[m] * x[m] - ysol[m - 1]) / x[0]);
    }
    rep.add("trial " + std::to_string(t) + " max a_m / bound", worst, 1.0, 1e-9);
  }
  rep.extra["oracle_vs_tridiagonal"] = oracle_dev;
  return rep;
}

CheckReport binomial_lemma_check(int max_m) {
  CheckReport rep;
  rep.name = "binomial_lemma";
  using boost::multiprecision::pow;
  std::size_t checked = 0, bad = 0;
  double worst = 0.0;
  for (int m1 = 0; m1 <= max_m; ++m1) {
    for (int m2 = 0; m1 + m2 <= max_m; ++m2) {
      BigInt binom = 1;
      for (int i = 0; i < m1; ++i) binom = binom * (m1 + m2 - i) / (i + 1);
      const BigInt lhs = binom * pow(BigInt(m1), m1) * pow(BigInt(m2), m2);  // 0^0 = 1 in cpp_int pow
      const BigInt rhs = pow(BigInt(m1 + m2), m1 + m2);
      ++checked;
      if (lhs > rhs) ++bad;
      worst = std::max(worst, lhs.convert_to<double>() / rhs.convert_to<double>());
    }
  }
  auto& row = rep.add("max lhs/rhs over " + std::to_string(checked) + " pairs", worst, 1.0, 0.0);
  row.ok = bad == 0;
  return rep;
}

CheckReport subset_energy_check(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& X,
                                const std::vector<int>& Xbar) {
  CheckReport rep;
  rep.name = "subset_energy";
  for (int x : X)
    if (std::find(Xbar.begin(), Xbar.end(), x) == Xbar.end()) {
      rep.refuse("X is not contained in Xbar");
      return rep;
    }
  EigenOptions opt;
  opt.n_eigs = 1;
  const auto hx = region_hamiltonian(spec, space, X, true);
  const auto hxb = region_hamiltonian(spec, space, Xbar, true);
  const double ex = ground_state(hx, opt).E0;
  const double exb = ground_state(hxb, opt).E0;
  rep.extra["E0_X"] = ex;
  rep.extra["E0_Xbar"] = exb;
  rep.add("E0(Xbar) - E0(X)", exb - ex, 0.0, 0.0, 1e-9 * std::max(1.0, std::abs(ex)));
  return rep;
}

CheckReport multicommutator_norm_check(const SparseOperator& h, const SparseOperator& o, int m_max,
                                       const std::function<double(int)>& bound, double tol) {
  CheckReport rep;
  rep.name = "multicommutator_norm";
  const SparseOperator od = o.adjoint();
  std::function<void(const SparseOperator&, int, const Vec&, Vec&)> ad = [&](const SparseOperator& op, int m,
                                                                           const Vec& x, Vec& y) {
    if (m == 0) {
      op.apply(x, y);
      return;
    }
    Vec hx = h.apply(x), t1, t2;
    ad(op, m - 1, hx, t1);
    ad(op, m - 1, x, t2);
    y = h.apply(t2) - t1;
  };
  std::vector<double> logm, logn;
  for (int m = 0; m <= m_max; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    LinearOperator a{h.dim(), [&, m](const Vec& x, Vec& y) { ad(o, m, x, y); }};
    LinearOperator at{h.dim(), [&, m, sign](const Vec& x, Vec& y) {
                        ad(od, m, x, y);
                        y *= sign;
                      }};
    const double nrm = operator_norm(a, at, 1e-12);
    rep.add("m=" + std::to_string(m), nrm, bound(m), tol);
    if (m >= 1 && nrm > 0) {
      logm.push_back(std::log(static_cast<double>(m)));
      logn.push_back(std::log(nrm));
    }
  }
  if (logm.size() >= 2) {
    const Eigen::Map<Eigen::VectorXd> xm(logm.data(), logm.size()), yn(logn.data(), logn.size());
    const double mx = xm.mean(), my = yn.mean();
    const double slope = ((xm.array() - mx) * (yn.array() - my)).sum() / (xm.array() - mx).square().sum();
    rep.extra["loglog_slope"] = slope;
  }
  return rep;
}

}  // namespace bw
