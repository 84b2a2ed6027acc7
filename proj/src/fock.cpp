#include "bosonwb/fock.hpp"

#include <cmath>
#include <stdexcept>

#include "bosonwb/kernels.hpp"

namespace bw {

namespace {

void drop_zeros(SpMat& m) {
  m.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0); });
  m.makeCompressed();
}

void check_site(const FockSpace& space, int site) {
  if (site < 0 || site >= space.n_sites())
    throw std::out_of_range("site " + std::to_string(site) + " outside a " +
                            std::to_string(space.n_sites()) + "-site space");
}

}  // namespace

FockSpace::FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw std::invalid_argument("FockSpace needs at least one site");
  strides_.resize(cutoffs_.size());
  dim_ = 1;
  for (std::size_t x = 0; x < cutoffs_.size(); ++x) {
    if (cutoffs_[x] < 0) throw std::invalid_argument("negative cutoff");
    strides_[x] = dim_;
    dim_ *= static_cast<std::size_t>(cutoffs_[x] + 1);
  }
}

FockSpace FockSpace::uniform(int n_sites, int cutoff) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  return FockSpace(std::vector<int>(n_sites, cutoff));
}

int FockSpace::total_occupation(std::size_t index) const {
  int t = 0;
  for (std::size_t x = 0; x < cutoffs_.size(); ++x) {
    const auto r = static_cast<std::size_t>(cutoffs_[x] + 1);
    t += static_cast<int>(index % r);
    index /= r;
  }
  return t;
}

std::vector<int> FockSpace::decode(std::size_t index) const {
  if (index >= dim_) throw std::out_of_range("basis index out of range");
  std::vector<int> occ(cutoffs_.size());
  for (std::size_t x = 0; x < cutoffs_.size(); ++x) {
    const auto r = static_cast<std::size_t>(cutoffs_[x] + 1);
    occ[x] = static_cast<int>(index % r);
    index /= r;
  }
  return occ;
}

std::size_t FockSpace::encode(std::span<const int> occ) const {
  if (occ.size() != cutoffs_.size()) throw std::invalid_argument("occupation list has wrong length");
  std::size_t idx = 0;
  for (std::size_t x = 0; x < cutoffs_.size(); ++x) {
    if (occ[x] < 0 || occ[x] > cutoffs_[x]) throw std::out_of_range("occupation exceeds cutoff");
    idx += static_cast<std::size_t>(occ[x]) * strides_[x];
  }
  return idx;
}

FockSpace FockSpace::slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > n_sites()) throw std::out_of_range("bad slice");
  return FockSpace(std::vector<int>(cutoffs_.begin() + first, cutoffs_.begin() + first + count));
}

void SparseOperator::apply(const Vec& x, Vec& y) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("vector dimension mismatch");
  y.resize(x.size());
  kernels::csr_matvec(mat, x.data(), y.data());
}

Vec SparseOperator::apply(const Vec& x) const {
  Vec y;
  apply(x, y);
  return y;
}

double SparseOperator::hermiticity_defect() const {
  SpMat d = mat - SpMat(mat.adjoint());
  return max_abs(d);
}

SparseOperator SparseOperator::adjoint() const {
  return {SpMat(mat.adjoint()), hermitian, name + "^dag"};
}

cplx SparseOperator::expectation(const Vec& psi) const { return psi.dot(apply(psi)); }

SpMat local_annihilation(int cutoff) {
  SpMat b(cutoff + 1, cutoff + 1);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int n = 1; n <= cutoff; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

SpMat local_number(int cutoff) {
  SpMat n(cutoff + 1, cutoff + 1);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int k = 1; k <= cutoff; ++k) t.emplace_back(k, k, static_cast<double>(k));
  n.setFromTriplets(t.begin(), t.end());
  return n;
}

SparseOperator embed(const SpMat& site_op, const FockSpace& space, int site, std::string name) {
  check_site(space, site);
  const int local = space.cutoff(site) + 1;
  if (site_op.rows() != local || site_op.cols() != local)
    throw std::invalid_argument("site operator dimension does not match the site cutoff");
  const std::size_t stride = space.stride(site);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(space.dim() * std::max<std::size_t>(1, site_op.nonZeros() / local + 1));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const int n = space.occupation(i, site);
    const std::size_t base = i - static_cast<std::size_t>(n) * stride;
    for (SpMat::InnerIterator it(site_op, n); it; ++it)
      t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(base + it.col() * stride), it.value());
  }
  SpMat m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  drop_zeros(m);
  const SpMat herm_check = site_op - SpMat(site_op.adjoint());
  return {std::move(m), max_abs(herm_check) == 0.0, std::move(name)};
}

SparseOperator identity_op(const FockSpace& space) {
  SpMat m(space.dim(), space.dim());
  m.setIdentity();
  return {std::move(m), true, "1"};
}

SparseOperator annihilation_op(const FockSpace& space, int site) {
  check_site(space, site);
  auto op = embed(local_annihilation(space.cutoff(site)), space, site, "b" + std::to_string(site));
  op.hermitian = false;
  return op;
}

SparseOperator creation_op(const FockSpace& space, int site) {
  check_site(space, site);
  SpMat bd = local_annihilation(space.cutoff(site)).adjoint();
  auto op = embed(bd, space, site, "bdag" + std::to_string(site));
  op.hermitian = false;
  return op;
}

SparseOperator number_op(const FockSpace& space, int site) {
  check_site(space, site);
  return embed(local_number(space.cutoff(site)), space, site, "n" + std::to_string(site));
}

SparseOperator number_power_op(const FockSpace& space, int site, int power) {
  check_site(space, site);
  if (power < 0) throw std::invalid_argument("negative power");
  const int c = space.cutoff(site);
  SpMat m(c + 1, c + 1);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int k = 0; k <= c; ++k) {
    const double v = std::pow(static_cast<double>(k), power);
    if (v != 0.0) t.emplace_back(k, k, v);
  }
  m.setFromTriplets(t.begin(), t.end());
  return embed(m, space, site, "n" + std::to_string(site) + "^" + std::to_string(power));
}

SparseOperator phi_op(const FockSpace& space, int site) {
  check_site(space, site);
  const SpMat b = local_annihilation(space.cutoff(site));
  SpMat phi = (b + SpMat(b.adjoint())) * cplx(1.0 / std::sqrt(2.0));
  return embed(phi, space, site, "phi" + std::to_string(site));
}

SparseOperator pi_op(const FockSpace& space, int site) {
  check_site(space, site);
  const SpMat b = local_annihilation(space.cutoff(site));
  SpMat pi = (b - SpMat(b.adjoint())) * cplx(0.0, -1.0 / std::sqrt(2.0));
  return embed(pi, space, site, "pi" + std::to_string(site));
}

SparseOperator compose(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
  SpMat m = a.mat * b.mat;
  drop_zeros(m);
  return {std::move(m), false, a.name + "*" + b.name};
}

SparseOperator compose(std::span<const SparseOperator> ops) {
  if (ops.empty()) throw std::invalid_argument("compose: empty list");
  SparseOperator acc = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) acc = compose(acc, ops[i]);
  acc.hermitian = ops.size() == 1 && ops.front().hermitian;
  return acc;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("commutator: dimension mismatch");
  SpMat m = a.mat * b.mat - b.mat * a.mat;
  drop_zeros(m);
  return {std::move(m), false, "[" + a.name + "," + b.name + "]"};
}

SparseOperator linear_combination(cplx a, const SparseOperator& x, cplx b, const SparseOperator& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("linear_combination: dimension mismatch");
  SpMat m = x.mat * a + y.mat * b;
  drop_zeros(m);
  const bool herm = x.hermitian && y.hermitian && a.imag() == 0.0 && b.imag() == 0.0;
  return {std::move(m), herm, x.name + "+" + y.name};
}

SparseOperator scaled(const SparseOperator& a, cplx s) {
  SpMat m = a.mat * s;
  drop_zeros(m);
  return {std::move(m), a.hermitian && s.imag() == 0.0, a.name};
}

SparseOperator power(const SparseOperator& a, int p) {
  if (p < 0) throw std::invalid_argument("negative operator power");
  SparseOperator acc{SpMat(a.dim(), a.dim()), true, a.name + "^" + std::to_string(p)};
  acc.mat.setIdentity();
  for (int i = 0; i < p; ++i) {
    acc.mat = acc.mat * a.mat;
    drop_zeros(acc.mat);
  }
  acc.hermitian = a.hermitian;
  return acc;
}

SparseOperator diagonal_projector(const FockSpace& space, const std::function<bool(std::size_t)>& pred,
                                  std::string name) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t i = 0; i < space.dim(); ++i)
    if (pred(i)) t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), 1.0);
  SpMat m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return {std::move(m), true, std::move(name)};
}

SparseOperator interior_projector(const FockSpace& space, int margin) {
  return diagonal_projector(
      space,
      [&](std::size_t i) {
        for (int x = 0; x < space.n_sites(); ++x)
          if (space.occupation(i, x) > space.cutoff(x) - margin) return false;
        return true;
      },
      "P_int");
}

SparseOperator site_tail_projector(const FockSpace& space, int site, int n) {
  check_site(space, site);
  return diagonal_projector(space, [&](std::size_t i) { return space.occupation(i, site) > n; }, "P_tail");
}

double max_abs(const SpMat& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

double max_abs_restricted(const SparseOperator& a, const SparseOperator& p) {
  SpMat m = p.mat * a.mat * p.mat;
  return max_abs(m);
}

}  // namespace bw
