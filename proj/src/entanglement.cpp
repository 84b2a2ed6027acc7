#include "bosonwb/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "bosonwb/models.hpp"

namespace bw {

namespace {

constexpr double kE = 2.718281828459045;

void guard(std::size_t rows, std::size_t cols, std::size_t budget) {
  // matrix plus both factor matrices
  const double bytes = 16.0 * (static_cast<double>(rows) * cols + static_cast<double>(rows) * rows +
                               static_cast<double>(cols) * cols);
  if (bytes > static_cast<double>(budget))
    throw std::length_error("dense SVD of " + std::to_string(rows) + " x " + std::to_string(cols) + " needs " +
                            std::to_string(static_cast<long long>(bytes)) + " bytes, above the budget of " +
                            std::to_string(budget));
}

CMat as_matrix(const Vec& v, std::size_t rows, std::size_t cols) {
  return Eigen::Map<const CMat>(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

std::size_t left_dim(const FockSpace& space, int cut) {
  return cut >= space.n_sites() ? space.dim() : space.stride(cut);
}

CMat random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

}  // namespace

SchmidtSpectrum schmidt_split(const Vec& state, std::size_t left, std::size_t right, bool vectors,
                              std::size_t byte_budget) {
  if (left * right != static_cast<std::size_t>(state.size()))
    throw std::invalid_argument("schmidt_split: dimensions do not match the state");
  guard(left, right, byte_budget);
  const double n = state.norm();
  if (!(n > 0.0)) throw std::invalid_argument("schmidt_split: zero state");
  const CMat M = as_matrix(state, left, right) / n;
  SchmidtSpectrum s;
  if (vectors) {
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    s.coefficients = svd.singularValues();
    s.left_vectors = svd.matrixU();
    s.right_vectors = svd.matrixV().conjugate();
  } else {
    Eigen::BDCSVD<CMat> svd(M);
    s.coefficients = svd.singularValues();
  }
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i)
    if (s.coefficients[i] > s.floor) ++s.rank;
  return s;
}

SchmidtSpectrum schmidt_decompose(const Vec& state, const FockSpace& space, int cut, bool vectors,
                                  std::size_t byte_budget) {
  if (cut <= 0 || cut >= space.n_sites()) throw std::invalid_argument("schmidt_decompose: cut must lie inside the chain");
  if (static_cast<std::size_t>(state.size()) != space.dim())
    throw std::invalid_argument("schmidt_decompose: state does not live in the space");
  const std::size_t left = left_dim(space, cut);
  auto s = schmidt_split(state, left, space.dim() / left, vectors, byte_budget);
  s.cut = cut;
  return s;
}

double entropy(const SchmidtSpectrum& s) {
  double S = 0.0;
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    const double p = s.coefficients[i] * s.coefficients[i];
    if (p > 0.0) S -= p * std::log(p);
  }
  return S;
}

double entropy_bits(const SchmidtSpectrum& s) { return entropy(s) / std::log(2.0); }

double schmidt_tail(const SchmidtSpectrum& s, int D) {
  double t = 0.0;
  for (Eigen::Index i = std::max(D, 0); i < s.coefficients.size(); ++i) t += s.coefficients[i] * s.coefficients[i];
  return t;
}

CMat reduced_density(const Vec& state, const FockSpace& space, int site) {
  const std::size_t inner = space.stride(site);
  const std::size_t d = static_cast<std::size_t>(space.cutoff(site)) + 1;
  const std::size_t outer = space.dim() / (inner * d);
  CMat rho = CMat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t o = 0; o < outer; ++o) {
    // inner x d block for this outer index
    Eigen::Map<const CMat> B(state.data() + o * inner * d, static_cast<Eigen::Index>(inner),
                             static_cast<Eigen::Index>(d));
    rho.noalias() += B.transpose() * B.conjugate();
  }
  return rho;
}

double trace_norm(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat((a + a.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

MPSApprox mps_compress(const Vec& state, const FockSpace& space, int D, std::size_t byte_budget) {
  if (D < 1) throw std::invalid_argument("mps_compress: bond dimension must be >= 1");
  const int L = space.n_sites();
  Vec psi = state;
  const double n = psi.norm();
  if (!(n > 0.0)) throw std::invalid_argument("mps_compress: zero state");
  psi /= n;
  MPSApprox r;
  r.D = D;
  for (int x = 1; x < L; ++x) {
    const auto s = schmidt_decompose(psi, space, x, false, byte_budget);
    r.delta.push_back(schmidt_tail(s, D));
  }
  for (double v : r.delta) r.delta_sum += v;
  r.bound = 2.0 * r.delta_sum;

  // Left-to-right SVD sweep; Q maps the bond index to the left sites.
  CMat Q = CMat::Identity(1, 1);
  CMat rest = as_matrix(psi, 1, space.dim());
  std::size_t dimL = 1;
  for (int x = 0; x + 1 < L; ++x) {
    const auto d = static_cast<std::size_t>(space.cutoff(x)) + 1;
    const auto bond = static_cast<std::size_t>(rest.rows());
    const std::size_t cols = static_cast<std::size_t>(rest.cols()) / d;
    const CMat M = Eigen::Map<const CMat>(rest.data(), static_cast<Eigen::Index>(bond * d),
                                          static_cast<Eigen::Index>(cols));
    guard(bond * d, cols, byte_budget);
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const Eigen::Index keep = std::min<Eigen::Index>(D, sv.size());
    double dropped = 0.0;
    for (Eigen::Index i = keep; i < sv.size(); ++i) dropped += sv[i] * sv[i];
    r.discarded.push_back(dropped);
    const CMat U = svd.matrixU().leftCols(keep);
    rest = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    CMat Qn(static_cast<Eigen::Index>(dimL * d), keep);
    for (std::size_t i = 0; i < d; ++i)
      Qn.middleRows(static_cast<Eigen::Index>(i * dimL), static_cast<Eigen::Index>(dimL)) =
          Q * U.middleRows(static_cast<Eigen::Index>(i * bond), static_cast<Eigen::Index>(bond));
    Q = std::move(Qn);
    dimL *= d;
  }
  const CMat full = Q * rest;  // dimL x d_last
  r.reconstruction = Eigen::Map<const Vec>(full.data(), full.size());
  r.error = (psi - r.reconstruction).norm();
  for (int x = 0; x < L; ++x)
    r.reduced_error.push_back(trace_norm(reduced_density(psi, space, x) - reduced_density(r.reconstruction, space, x)));

  {
    const double a2 = psi.squaredNorm(), b2 = r.reconstruction.squaredNorm();
    // a2 b2 - |<psi, M>|^2 = a2 |M_perp|^2, computed without cancellation
    const Vec perp = r.reconstruction - (psi.dot(r.reconstruction) / a2) * psi;
    r.global_trace_error = std::sqrt((a2 - b2) * (a2 - b2) + 4.0 * a2 * perp.squaredNorm());
  }
  auto& rep = r.report;
  rep.name = "mps_D" + std::to_string(D);
  rep.extra["delta"] = r.delta;
  rep.extra["discarded"] = r.discarded;
  rep.extra["error"] = r.error;
  rep.extra["reduced_error"] = r.reduced_error;
  rep.add("reconstruction norm <= 1", r.reconstruction.norm(), 1.0, 1e-12);
  rep.add("||psi - M|| <= 2 sum delta", r.error, r.bound, 1e-9, 1e-12);
  rep.add("||psi - M||^2 <= 2 sum delta", r.error * r.error, r.bound, 1e-9, 1e-12);
  rep.add("||psi psi^+ - M M^+||_1 <= 2 sum delta", r.global_trace_error, r.bound, 1e-9, 1e-12);
  for (int x = 0; x < L; ++x) {
    // X = {x}: the only cut inside X is the one to the right of x
    const double own = x + 1 < L ? r.delta[x] : 0.0;
    rep.add("site " + std::to_string(x) + " reduced trace distance <= 2 delta (cut right of site)",
            r.reduced_error[x], 2.0 * own, 1e-9, 1e-12);
    rep.info("site " + std::to_string(x) + " reduced trace distance vs 2 sum delta (all cuts)", r.reduced_error[x],
             r.bound);
  }
  return r;
}

CheckReport eckart_young_check(const Vec& state, std::size_t left, std::size_t right, int rank, int trials,
                               std::uint64_t seed) {
  CheckReport rep;
  rep.name = "eckart_young";
  if (rank < 1) throw std::invalid_argument("eckart_young_check: rank must be >= 1");
  const Vec psi = state / state.norm();
  const CMat M = as_matrix(psi, left, right);
  Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double tail = 0.0;
  for (Eigen::Index i = rank; i < s.size(); ++i) tail += s[i] * s[i];
  std::mt19937_64 rng(seed);
  const auto r = static_cast<Eigen::Index>(rank);
  const auto li = static_cast<Eigen::Index>(left), ri = static_cast<Eigen::Index>(right);
  double worst = INFINITY;
  for (int t = 0; t < trials; ++t) {
    CMat P = random_matrix(li, r, rng) * random_matrix(r, ri, rng);
    P /= P.norm();
    const double d2 = (M - P).squaredNorm();
    worst = std::min(worst, d2 - tail);
    rep.add("trial " + std::to_string(t) + ": tail <= ||psi - psi'||^2", tail, d2, 1e-12, 1e-14);
  }
  const Eigen::Index keep = std::min(r, s.size());
  const CMat T = svd.matrixU().leftCols(keep) * s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  const double dt = (M - T).squaredNorm();
  rep.add("SVD truncation: | ||psi - psi_r||^2 - tail |", std::abs(dt - tail), 0.0, 0.0, 1e-10);
  const double tn = T.norm();
  if (tn > 0.0) rep.add("renormalized truncation: tail <= distance^2", tail, (M - T / tn).squaredNorm(), 1e-12, 1e-14);
  rep.extra["tail"] = tail;
  rep.extra["min_slack"] = worst;
  return rep;
}

AreaLawParams area_law_params_bh(int k, double alpha_bar) {
  AreaLawParams p;
  p.alpha_bar = alpha_bar;
  p.upsilon = 0.0;
  p.chi = k / 2.0;
  return p;
}

AreaLawParams area_law_params_phi4(int k, double alpha_bar) {
  AreaLawParams p;
  p.alpha_bar = alpha_bar;
  p.upsilon = k * k / 4.0;
  p.chi = k * k / 2.0;
  return p;
}

double area_law_bound(const AreaLawParams& p, double gap) {
  if (!(gap > 0.0)) throw std::invalid_argument("area law bound: gap must be positive");
  const double a = p.alpha_bar;
  const double e1 = (1.0 + 2.0 / a) * (p.upsilon + 1.0);
  const double e2 = 4.0 + 3.0 / a + p.chi * (1.0 + 2.0 / a);
  const double lg = std::log(1.0 / gap);
  if (!(lg > 0.0)) return NAN;
  return p.C0 * std::pow(gap, -e1) * std::pow(lg, e2);
}

CheckReport area_law_report(const SpectralData& sd, const FockSpace& space, int cut, const AreaLawParams& p) {
  CheckReport rep;
  rep.name = "area_law";
  if (!(sd.gap > 0.0)) {
    rep.refuse("zero gap");
    return rep;
  }
  const auto s = schmidt_decompose(sd.ground, space, cut);
  const double S = entropy(s);
  const double B = area_law_bound(p, sd.gap);
  rep.extra["entropy"] = S;
  rep.extra["entropy_bits"] = entropy_bits(s);
  rep.extra["gap"] = sd.gap;
  rep.extra["bound"] = B;
  rep.extra["ratio"] = std::isfinite(B) && B > 0.0 ? S / B : NAN;
  rep.extra["alpha_bar"] = p.alpha_bar;
  rep.extra["chi"] = p.chi;
  rep.extra["upsilon"] = p.upsilon;
  rep.extra["C0"] = p.C0;
  rep.add("entropy is finite", std::isfinite(S) ? 0.0 : 1.0, 0.0);
  rep.add("entropy is non-negative", -S, 0.0, 0.0, 1e-12);
  rep.info("entropy vs structural bound at C0", S, B);
  return rep;
}

std::vector<SweepRow> bh_entropy_sweep(int L, int cutoff, double U, const std::vector<double>& J, int cut,
                                       const AreaLawParams& p) {
  std::vector<SweepRow> rows;
  const FockSpace space = FockSpace::uniform(L, cutoff);
  for (double j : J) {
    const auto spec = standard_bose_hubbard(L, j, U);
    const auto sd = ground_state(build_hamiltonian(spec, space));
    SweepRow r;
    r.parameter = j;
    r.gap = sd.gap;
    r.entropy = entropy(schmidt_decompose(sd.ground, space, cut));
    r.bound = sd.gap > 0.0 ? area_law_bound(p, sd.gap) : NAN;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace bw
