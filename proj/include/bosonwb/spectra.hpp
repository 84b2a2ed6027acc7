// Ground states, gaps and spectral projectors.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bosonwb/fock.hpp"
#include "bosonwb/models.hpp"

namespace bw {

// Matrix-free Hermitian operator.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(const Vec&, Vec&)> apply;
};

LinearOperator as_linear(const SparseOperator& op);
LinearOperator as_linear(const CMat& m);

enum class Transform { None, ShiftInvert };

struct EigenOptions {
  int n_eigs = 2;
  // ShiftInvert runs Lanczos on -(H - shift)^{-1}. The shift must lie below the
  // spectrum; this is verified through the LDL^T inertia and lowered if needed.
  Transform transform = Transform::None;
  double shift = 0.0;
  double tol = 1e-10;
  int max_restarts = 400;
  int krylov_dim = 0;  // 0 picks max(2 n_eigs + 30, 48)
  std::size_t dense_threshold = 2000;
  bool force_krylov = false;
  std::uint64_t seed = 7;
  std::optional<Vec> start;
  double degeneracy_tol = 1e-10;
};

struct SolverMeta {
  std::string method;
  int iterations = 0;
  int restarts = 0;
  double tol = 0.0;
  bool converged = false;
};

struct SpectralData {
  double E0 = 0.0;
  double gap = 0.0;
  Vec ground;
  std::vector<std::pair<double, double>> low_eigs;  // (value, residual)
  std::vector<Vec> vectors;
  bool degenerate = false;
  SolverMeta meta;
};

// Lowest eigenpairs by thick-restart Lanczos with full reorthogonalization.
SpectralData lanczos_lowest(const LinearOperator& a, const EigenOptions& opt);
SpectralData dense_lowest(const CMat& h, const EigenOptions& opt);

SpectralData ground_state(const SparseOperator& h, const EigenOptions& opt = {});
SpectralData ground_state(const LinearOperator& h, const EigenOptions& opt = {});

// Random start weighted by exp(-total occupation).
Vec fock_weighted_start(const FockSpace& space, std::uint64_t seed);
Vec random_unit_vector(std::size_t dim, std::uint64_t seed);

// Largest |eigenvalue| of a Hermitian operator.
double hermitian_norm(const LinearOperator& a, double tol = 1e-10, std::uint64_t seed = 11);
// Largest singular value of a general operator via a^dagger a.
double operator_norm(const LinearOperator& a, const LinearOperator& a_adjoint, double tol = 1e-10,
                     std::uint64_t seed = 11);

enum class Side { LessEqual, Greater };

struct DenseEig {
  Eigen::VectorXd values;
  CMat vectors;
};
DenseEig dense_eigh(const CMat& h);

constexpr std::size_t kDenseProjectorBudget = 4096;

SparseOperator spectral_projector(const SparseOperator& h, double threshold, Side side);
CMat spectral_projector_dense(const CMat& h, double threshold, Side side);

// Terms of `spec` supported inside `region`.
SparseOperator subset_hamiltonian(const ModelSpec& spec, const FockSpace& space, const std::vector<int>& region,
                                  bool reduced = false);

}  // namespace bw
