// Truncated bosonic Fock spaces and sparse operator algebra.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bw {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Per-site cutoffs with a mixed-radix basis. Site 0 is the fastest digit:
// index = sum_x n_x * stride_x with stride_0 = 1, stride_{x+1} = stride_x * (N_x + 1).
class FockSpace {
 public:
  FockSpace() : FockSpace(std::vector<int>{0}) {}
  explicit FockSpace(std::vector<int> cutoffs);
  static FockSpace uniform(int n_sites, int cutoff);

  int n_sites() const { return static_cast<int>(cutoffs_.size()); }
  std::size_t dim() const { return dim_; }
  int cutoff(int site) const { return cutoffs_.at(site); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::size_t stride(int site) const { return strides_.at(site); }

  int occupation(std::size_t index, int site) const {
    return static_cast<int>((index / strides_[site]) % static_cast<std::size_t>(cutoffs_[site] + 1));
  }
  int total_occupation(std::size_t index) const;
  std::vector<int> decode(std::size_t index) const;
  std::size_t encode(std::span<const int> occ) const;

  // Contiguous sites [first, first + count) as a space of their own.
  FockSpace slice(int first, int count) const;

  bool operator==(const FockSpace& o) const { return cutoffs_ == o.cutoffs_; }

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
};

struct SparseOperator {
  SpMat mat;
  bool hermitian = false;
  std::string name;

  SparseOperator() = default;
  SparseOperator(SpMat m, bool herm, std::string nm)
      : mat(std::move(m)), hermitian(herm), name(std::move(nm)) {}

  std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
  std::size_t nnz() const { return static_cast<std::size_t>(mat.nonZeros()); }

  void apply(const Vec& x, Vec& y) const;
  Vec apply(const Vec& x) const;
  CMat dense() const { return CMat(mat); }
  // max_ij |A_ij - conj(A_ji)|
  double hermiticity_defect() const;
  SparseOperator adjoint() const;
  cplx expectation(const Vec& psi) const;
};

SparseOperator identity_op(const FockSpace& space);
SparseOperator annihilation_op(const FockSpace& space, int site);
SparseOperator creation_op(const FockSpace& space, int site);
SparseOperator number_op(const FockSpace& space, int site);
SparseOperator number_power_op(const FockSpace& space, int site, int power);
SparseOperator phi_op(const FockSpace& space, int site);
SparseOperator pi_op(const FockSpace& space, int site);

// Lifts a single-site matrix (dimension N_site + 1) into the full space.
SparseOperator embed(const SpMat& site_op, const FockSpace& space, int site, std::string name = "embed");

SparseOperator compose(std::span<const SparseOperator> ops);
SparseOperator compose(const SparseOperator& a, const SparseOperator& b);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator linear_combination(cplx a, const SparseOperator& x, cplx b, const SparseOperator& y);
SparseOperator scaled(const SparseOperator& a, cplx s);
SparseOperator power(const SparseOperator& a, int p);

// Diagonal 0/1 projector onto basis states with pred(index) true.
SparseOperator diagonal_projector(const FockSpace& space, const std::function<bool(std::size_t)>& pred,
                                  std::string name = "projector");
// Occupations n_x <= N_x - margin on every site.
SparseOperator interior_projector(const FockSpace& space, int margin);
// Occupation of one site strictly above n.
SparseOperator site_tail_projector(const FockSpace& space, int site, int n);

// Single-site matrices on a cutoff-N local space.
SpMat local_annihilation(int cutoff);
SpMat local_number(int cutoff);

double max_abs(const SpMat& m);
// max |entry| of P A P.
double max_abs_restricted(const SparseOperator& a, const SparseOperator& p);

}  // namespace bw
