#include "bosonwb/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace bw {

namespace {

bool is_real(const CMat& h) { return h.imag().cwiseAbs().maxCoeff() == 0.0; }

void finish_gap(SpectralData& d, const EigenOptions& opt) {
  d.E0 = d.low_eigs.front().first;
  d.ground = d.vectors.front();
  if (d.low_eigs.size() < 2) {
    d.gap = 0.0;
    d.degenerate = false;
    return;
  }
  const double e1 = d.low_eigs[1].first;
  const double scale = std::max({1.0, std::abs(d.E0), std::abs(e1)});
  d.gap = e1 - d.E0;
  d.degenerate = d.gap <= opt.degeneracy_tol * scale;
  if (d.degenerate) d.gap = 0.0;
}

// Orthogonalize w against the first `cols` columns of V twice; returns the projection coefficients.
Eigen::VectorXcd orthogonalize(const CMat& V, int cols, Vec& w) {
  Eigen::VectorXcd c = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * c;
  Eigen::VectorXcd c2 = V.leftCols(cols).adjoint() * w;
  w.noalias() -= V.leftCols(cols) * c2;
  return c + c2;
}

}  // namespace

LinearOperator as_linear(const SparseOperator& op) {
  return {op.dim(), [&op](const Vec& x, Vec& y) { op.apply(x, y); }};
}

LinearOperator as_linear(const CMat& m) {
  return {static_cast<std::size_t>(m.rows()), [&m](const Vec& x, Vec& y) { y.noalias() = m * x; }};
}

Vec random_unit_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vec v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = cplx(nd(rng), nd(rng));
  v.normalize();
  return v;
}

Vec fock_weighted_start(const FockSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vec v(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const double w = std::exp(-static_cast<double>(space.total_occupation(i)));
    v[i] = cplx(nd(rng), nd(rng)) * w;
  }
  v.normalize();
  return v;
}

DenseEig dense_eigh(const CMat& h) {
  DenseEig out;
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

SpectralData dense_lowest(const CMat& h, const EigenOptions& opt) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("dense_lowest: bad matrix");
  const CMat hh = (h + h.adjoint()) * 0.5;
  const DenseEig es = dense_eigh(hh);
  SpectralData d;
  const int nev = std::min<int>(std::max(opt.n_eigs, 1), static_cast<int>(h.rows()));
  for (int i = 0; i < nev; ++i) {
    Vec v = es.vectors.col(i);
    const double res = (hh * v - es.values[i] * v).norm();
    d.low_eigs.emplace_back(es.values[i], res);
    d.vectors.push_back(std::move(v));
  }
  d.meta = {"dense", 0, 0, opt.tol, true};
  finish_gap(d, opt);
  return d;
}

SpectralData lanczos_lowest(const LinearOperator& a, const EigenOptions& opt) {
  const int n = static_cast<int>(a.dim);
  if (n < 1) throw std::invalid_argument("lanczos: empty operator");
  const int nev = std::min(std::max(opt.n_eigs, 1), n);
  int m = opt.krylov_dim > 0 ? opt.krylov_dim : std::max(2 * nev + 30, 48);
  m = std::min(m, n);

  CMat V(n, m);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(m, m);
  Vec v0 = opt.start ? *opt.start : random_unit_vector(n, opt.seed);
  if (v0.size() != n) throw std::invalid_argument("lanczos: start vector has wrong dimension");
  if (v0.norm() == 0.0) v0 = random_unit_vector(n, opt.seed);
  V.col(0) = v0.normalized();

  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  auto fresh_direction = [&](int cols) {
    std::normal_distribution<double> nd;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vec r(n);
      for (int i = 0; i < n; ++i) r[i] = cplx(nd(rng), nd(rng));
      orthogonalize(V, cols, r);
      const double nr = r.norm();
      if (nr > 1e-8) return Vec(r / nr);
    }
    throw std::runtime_error("lanczos: cannot extend an exhausted basis");
  };

  SolverMeta meta{"lanczos", 0, 0, opt.tol, false};
  int kept = 0;
  double anorm = 0.0;
  Vec w(n), f(n);
  double beta = 0.0;

  auto ritz = [&](int s) {
    Eigen::MatrixXcd Ts = T.topLeftCorner(s, s);
    Ts = (Ts + Ts.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Ts);
    return es;
  };

  auto converged = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, int s, double b) {
    if (s < nev) return false;
    if (s == n) return true;
    for (int i = 0; i < nev; ++i) {
      const double th = es.eigenvalues()[i];
      const double res = b * std::abs(es.eigenvectors()(s - 1, i));
      if (res > opt.tol * std::max(1.0, std::abs(th))) return false;
    }
    return true;
  };

  auto finish = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, int s) {
    SpectralData d;
    Vec y(n);
    for (int i = 0; i < nev; ++i) {
      Vec x = V.leftCols(s) * es.eigenvectors().col(i);
      x.normalize();
      a.apply(x, y);
      const double th = std::real(x.dot(y));
      d.low_eigs.emplace_back(th, (y - th * x).norm());
      d.vectors.push_back(std::move(x));
    }
    // Ritz values from separate cycles can be out of order by roundoff.
    std::vector<int> order(nev);
    for (int i = 0; i < nev; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int p, int q) { return d.low_eigs[p].first < d.low_eigs[q].first; });
    SpectralData sorted;
    for (int i : order) {
      sorted.low_eigs.push_back(d.low_eigs[i]);
      sorted.vectors.push_back(d.vectors[i]);
    }
    sorted.meta = meta;
    finish_gap(sorted, opt);
    return sorted;
  };

  for (int cycle = 0; cycle <= opt.max_restarts; ++cycle) {
    for (int j = kept; j < m; ++j) {
      w.resize(n);
      a.apply(Vec(V.col(j)), w);
      ++meta.iterations;
      anorm = std::max(anorm, w.norm());
      const Eigen::VectorXcd c = orthogonalize(V, j + 1, w);
      for (int i = 0; i < j; ++i) {
        T(i, j) = c[i];
        T(j, i) = std::conj(c[i]);
      }
      T(j, j) = c[j].real();
      beta = w.norm();
      const bool breakdown = beta <= 1e-13 * std::max(1.0, anorm);
      const int s = j + 1;
      if (breakdown || s == m || s == n || (s >= nev && s % 5 == 0)) {
        const auto es = ritz(s);
        const double b = breakdown ? 0.0 : beta;
        if (converged(es, s, b) || (breakdown && s >= nev && s == n)) {
          meta.converged = true;
          return finish(es, s);
        }
        if (breakdown && s >= nev) {
          // invariant subspace: accept if every wanted pair sits inside it and no room remains
          if (s == n) {
            meta.converged = true;
            return finish(es, s);
          }
        }
      }
      if (s < m) {
        if (breakdown) {
          V.col(s) = fresh_direction(s);
        } else {
          V.col(s) = w / beta;
        }
      } else {
        f = breakdown ? Vec(Vec::Zero(n)) : w;
      }
    }
    // thick restart: keep the lowest Ritz vectors
    const auto es = ritz(m);
    const int keep = std::min(m - 2, std::max(nev, nev + (m - nev) / 2));
    if (keep < 1) break;
    CMat U = V * es.eigenvectors().leftCols(keep);
    T.setZero();
    for (int i = 0; i < keep; ++i) T(i, i) = es.eigenvalues()[i];
    V.leftCols(keep) = U;
    const double fn = f.norm();
    if (fn > 1e-13 * std::max(1.0, anorm)) {
      Vec g = f / fn;
      orthogonalize(V, keep, g);
      g.normalize();
      V.col(keep) = g;
      // T(keep, i) is filled when A v_keep is formed
    } else {
      V.col(keep) = fresh_direction(keep);
    }
    kept = keep;
    ++meta.restarts;
  }
  // not converged: report what we have
  meta.converged = false;
  const auto es = ritz(std::max(kept, 1));
  auto d = finish(es, std::max(kept, 1));
  d.meta.converged = false;
  return d;
}

SpectralData ground_state(const LinearOperator& h, const EigenOptions& opt) {
  if (opt.n_eigs < 1) throw std::invalid_argument("n_eigs must be >= 1");
  if (!opt.force_krylov && h.dim <= opt.dense_threshold) {
    CMat dense(h.dim, h.dim);
    Vec e = Vec::Zero(h.dim), col(h.dim);
    for (std::size_t j = 0; j < h.dim; ++j) {
      e.setZero();
      e[j] = 1.0;
      h.apply(e, col);
      dense.col(j) = col;
    }
    return dense_lowest(dense, opt);
  }
  auto d = lanczos_lowest(h, opt);
  if (!d.meta.converged) throw std::runtime_error("lanczos did not converge within the restart budget");
  return d;
}

namespace {

SpectralData shift_invert_lowest(const SparseOperator& h, const EigenOptions& opt) {
  using ColMat = Eigen::SparseMatrix<cplx>;
  ColMat id(h.dim(), h.dim());
  id.setIdentity();
  const ColMat hc = h.mat;
  double sigma = opt.shift;
  Eigen::SimplicialLDLT<ColMat> ldlt;
  for (int attempt = 0;; ++attempt) {
    ldlt.compute(hc - id * cplx(sigma));
    bool pd = ldlt.info() == Eigen::Success;
    if (pd)
      for (Eigen::Index i = 0; i < ldlt.vectorD().size(); ++i) pd = pd && ldlt.vectorD()[i].real() > 0.0;
    if (pd) break;
    if (attempt > 60) throw std::runtime_error("shift-invert: no shift below the spectrum found");
    sigma -= std::max(1.0, 2.0 * std::abs(sigma));
  }
  LinearOperator inv{h.dim(), [&ldlt](const Vec& x, Vec& y) { y = -ldlt.solve(x); }};
  EigenOptions o = opt;
  o.transform = Transform::None;
  auto d = lanczos_lowest(inv, o);
  if (!d.meta.converged) throw std::runtime_error("shift-invert lanczos did not converge");
  // map back: Rayleigh quotients and residuals of H itself
  std::vector<std::pair<double, Vec>> pairs;
  for (auto& v : d.vectors) pairs.emplace_back(std::real(h.expectation(v)), v);
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SpectralData out;
  for (auto& [th, v] : pairs) {
    const double res = (h.apply(v) - th * v).norm();
    out.low_eigs.emplace_back(th, res);
    out.vectors.push_back(std::move(v));
  }
  out.meta = d.meta;
  out.meta.method = "lanczos_shift_invert";
  finish_gap(out, opt);
  return out;
}

}  // namespace

SpectralData ground_state(const SparseOperator& h, const EigenOptions& opt) {
  if (h.hermiticity_defect() > 1e-12 * std::max(1.0, max_abs(h.mat)))
    throw std::invalid_argument("ground_state: operator is not Hermitian");
  if (opt.n_eigs < 1) throw std::invalid_argument("n_eigs must be >= 1");
  if (!opt.force_krylov && h.dim() <= opt.dense_threshold) return dense_lowest(h.dense(), opt);
  if (opt.transform == Transform::ShiftInvert) return shift_invert_lowest(h, opt);
  auto d = lanczos_lowest(as_linear(h), opt);
  if (!d.meta.converged) throw std::runtime_error("lanczos did not converge within the restart budget");
  return d;
}

double hermitian_norm(const LinearOperator& a, double tol, std::uint64_t seed) {
  EigenOptions opt;
  opt.n_eigs = 1;
  opt.tol = tol;
  opt.seed = seed;
  opt.force_krylov = true;
  if (a.dim <= 1) {
    Vec e = Vec::Ones(a.dim), y;
    a.apply(e, y);
    return a.dim == 0 ? 0.0 : std::abs(y[0]);
  }
  const auto lo = lanczos_lowest(a, opt);
  LinearOperator neg{a.dim, [&a](const Vec& x, Vec& y) {
                       a.apply(x, y);
                       y = -y;
                     }};
  const auto hi = lanczos_lowest(neg, opt);
  return std::max(std::abs(lo.E0), std::abs(hi.E0));
}

double operator_norm(const LinearOperator& a, const LinearOperator& a_adjoint, double tol, std::uint64_t seed) {
  LinearOperator ata{a.dim, [&](const Vec& x, Vec& y) {
                       Vec t;
                       a.apply(x, t);
                       a_adjoint.apply(t, y);
                     }};
  LinearOperator neg{a.dim, [&](const Vec& x, Vec& y) {
                       ata.apply(x, y);
                       y = -y;
                     }};
  EigenOptions opt;
  opt.n_eigs = 1;
  opt.tol = tol;
  opt.seed = seed;
  opt.force_krylov = true;
  if (a.dim <= 1) {
    Vec e = Vec::Ones(a.dim), y;
    ata.apply(e, y);
    return a.dim == 0 ? 0.0 : std::sqrt(std::abs(y[0]));
  }
  const auto r = lanczos_lowest(neg, opt);
  return std::sqrt(std::max(0.0, -r.E0));
}

CMat spectral_projector_dense(const CMat& h, double threshold, Side side) {
  if (static_cast<std::size_t>(h.rows()) > kDenseProjectorBudget)
    throw std::length_error("spectral projector: dimension above the dense budget");
  const DenseEig es = dense_eigh((h + h.adjoint()) * 0.5);
  std::vector<int> sel;
  for (int i = 0; i < es.values.size(); ++i) {
    const bool le = es.values[i] <= threshold;
    if ((side == Side::LessEqual) == le) sel.push_back(i);
  }
  CMat S(h.rows(), static_cast<Eigen::Index>(sel.size()));
  for (std::size_t c = 0; c < sel.size(); ++c) S.col(c) = es.vectors.col(sel[c]);
  return S * S.adjoint();
}

SparseOperator spectral_projector(const SparseOperator& h, double threshold, Side side) {
  const CMat p = spectral_projector_dense(h.dense(), threshold, side);
  SpMat m = p.sparseView(1.0, 0.0);
  m.makeCompressed();
  return {std::move(m), true, "spectral_projector"};
}

SparseOperator subset_hamiltonian(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& region,
                                  bool reduced) {
  return region_hamiltonian(spec, space, region, reduced);
}

}  // namespace bw
