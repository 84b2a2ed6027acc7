// Effective-Hamiltonian pipeline (boson truncation, block interaction truncation,
// multi-energy cutoff) and the Chebyshev AGSP with its certificate.
#pragma once

#include <optional>
#include <vector>

#include "bosonwb/constants.hpp"
#include "bosonwb/fock.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/report.hpp"
#include "bosonwb/spectra.hpp"

namespace bw {

// Distance of a site from the cut bond; the two sites adjacent to the cut sit at 0.
// `cut` is the first site of the right half.
int distance_to_cut(int site, int cut);

// N_x = ceil(b^{-a} [log(1/eps0) + log(|x|^3 + 1)]^a), at least n_min.
struct TruncationSchedule {
  double eps0 = 1e-3;
  double a = 1.0;
  double b = 0.5;
  int n_min = 1;

  int cutoff_at(int distance) const;
  std::vector<int> cutoffs(int L, int cut) const;
};

struct BlockDecomposition {
  int L = 0;
  int q = 2;
  int l = 1;
  int cut = 0;  // first site of R
  std::vector<std::vector<int>> blocks;  // B_0 .. B_{q+1}, contiguous and ascending
  std::vector<int> tilde_first;          // last l sites of B_0
  std::vector<int> tilde_last;           // first l sites of B_{q+1}

  // Central blocks of length l around the middle; edge blocks take the rest.
  static BlockDecomposition make(int L, int q, int l);
  int block_of(int site) const;
  std::vector<int> left_sites() const;
  // Whether a term with this support survives the interaction truncation.
  bool keeps(const std::vector<int>& support) const;
};

// Embedding of a state between spaces whose cutoffs are ordered small <= large.
Vec embed_state(const FockSpace& small, const FockSpace& large, const Vec& v);
Vec restrict_state(const FockSpace& large, const FockSpace& small, const Vec& v);
// min over phases of || a - e^{i t} b || for unit vectors
double state_distance(const Vec& a, const Vec& b);

// Measured inputs of the arbitrary-projection lemma: eps_Omega = 1 - ||P Omega||^2 and
// eps_H = <Omega|P (H - E0) P|Omega> / ||P Omega||^2.
struct ProjectionLemma {
  double eps_omega = 0.0;
  double eps_h = 0.0;
  double displacement_bound = 0.0;
  double gap_bound = 0.0;
  bool applicable = false;  // eps_omega <= 1/2 and gap > 2 eps_h
};
ProjectionLemma projection_lemma(double eps_omega, double eps_h, double gap);

struct BosonTruncation {
  FockSpace space;
  SparseOperator H_bar;
  SpectralData sd;
  Vec ground_ambient;
  double displacement = 0.0;
  double gap_ratio = 0.0;
  double tail_chain = 0.0;  // sum_i ||Pi_{i, > N_i} Omega||
  ProjectionLemma lemma;
  CheckReport report;
};

BosonTruncation boson_truncate(const ModelSpec& spec, const FockSpace& ambient, const SparseOperator& H_ambient,
                               const SpectralData& ambient_sd, const std::vector<int>& cutoffs,
                               const EigenOptions& opt = {});

// sup over x of max_{i,i'} sum_{Z contains i,i', Z in [-x,x]} ||h_Z|| / Jbar(d) minus g1 log^chi(x+1);
// the growth profile is raised to dominate the measured interaction strength.
GrowthProfile validated_growth_profile(const ModelSpec& spec, const FockSpace& space, int cut, GrowthProfile formula,
                                       double alpha_bar);

struct InteractionTruncation {
  SparseOperator H_t;
  SpectralData sd;
  double dH_norm = 0.0;
  double displacement = 0.0;  // || Omega_bar - Omega_t ||
  std::vector<double> coupling_norms;  // ||h_{s,s+1}||
  CheckReport report;
};

InteractionTruncation interaction_truncate(const ModelSpec& spec, const FockSpace& space, const BosonTruncation& bt,
                                           const BlockDecomposition& blocks, const PartTwoConstants& pc,
                                           const EigenOptions& opt = {});

// Block-product isometry W = (x)_s W_s onto the kept block eigenvectors.
struct BlockIsometry {
  std::vector<int> full_dims;
  std::vector<int> kept_dims;
  std::vector<CMat> W;

  std::size_t full_dim() const;
  std::size_t kept_dim() const;
  Vec up(const Vec& c) const;    // W c
  Vec down(const Vec& v) const;  // W^dagger v
  // Sizes of the left / right factors of the compressed space for a cut after block `last_left`.
  std::pair<std::size_t, std::size_t> split(int last_left) const;
};

struct EnergyCutoff {
  double tau = 0.0;
  std::vector<double> block_E0;
  std::vector<double> block_tau;
  std::vector<int> block_kept;
  BlockIsometry iso;
  LinearOperator H_compressed;  // c -> W^dagger H_t W c
  SpectralData sd;              // of the compressed Hamiltonian
  Vec ground_full;    // W Omega~ in the reduced space
  double displacement = 0.0;  // || Omega_t - Omega~_t ||
  double width = 0.0;         // ||H~ - E~0||, measured
  double eps1 = 0.0;
  double eps2 = 0.0;
  ProjectionLemma lemma;
  CheckReport report;
};

// Compressed Hamiltonians up to this dimension are diagonalized densely.
constexpr std::size_t kCompressedDenseLimit = 600;

EnergyCutoff energy_cutoff(const ModelSpec& spec, const FockSpace& space, const InteractionTruncation& it,
                           const BlockDecomposition& blocks, double tau, const PartTwoConstants& pc);

// K(m, x) = T_m[(2x - (W + D)) / (W - D)] / T_m[-(W + D) / (W - D)] applied to H - E0.
class ChebyshevAGSP {
 public:
  ChebyshevAGSP(LinearOperator h, double E0, double gap, double width, int m);

  void apply(const Vec& x, Vec& y) const;
  Vec apply(const Vec& x) const;
  LinearOperator as_operator() const;
  // K evaluated on a scalar energy offset x = E - E0.
  double scalar(double x) const;
  int degree() const { return m_; }
  double width() const { return width_; }
  double gap() const { return gap_; }
  // log |T_m(y0)| at the normalization point
  double log_denominator() const;
  // 2 exp(-2 m sqrt(gap / width))
  double error_bound() const;

 private:
  LinearOperator h_;
  double E0_, gap_, width_;
  int m_;
  double y0_;
  std::vector<double> rho_;  // T_j(y0) / T_{j+1}(y0)
};

// Width is 1.01 times the measured ||H - E0|| unless given.
ChebyshevAGSP chebyshev_agsp(const LinearOperator& h, double E0, double gap, int m, double width = 0.0);

struct AGSPReport {
  int m = 0;
  double delta_K = 0.0;
  double delta_chain = 0.0;
  double eps_K = 0.0;
  double eps_bound = 0.0;
  double fixes_ground = 0.0;  // ||K Omega~ - Omega~||
  int schmidt_rank_state = 0;  // SR(K |product>)
  int schmidt_rank_operator = -1;  // SR(K), -1 when above budget
  double log10_D_theory = 0.0;
  bool bootstrap_condition = false;
  double bootstrap_distance = 0.0;
  double bootstrap_bound = 0.0;
  CheckReport report;
};

// Schmidt rank bound for H^j summed over j = 0..m, in log10.
double log10_schmidt_rank_bound(int m, int q, int l, int k, int d);

struct PipelineStages {
  const ModelSpec* spec = nullptr;
  const FockSpace* ambient = nullptr;
  const SpectralData* ambient_sd = nullptr;
  const BosonTruncation* bt = nullptr;
  const InteractionTruncation* it = nullptr;
  const EnergyCutoff* ec = nullptr;
  const BlockDecomposition* blocks = nullptr;
};

// K acts on the compressed space of st.ec; eps_bound is the claimed bound on ||K (1 - P)||.
AGSPReport agsp_certificate(const LinearOperator& K, int m, double eps_bound, const PipelineStages& st,
                            std::size_t operator_rank_limit = 256);
AGSPReport agsp_certificate(const ChebyshevAGSP& K, const PipelineStages& st, std::size_t operator_rank_limit = 256);
Status bootstrap_check(const AGSPReport& r);

struct PipelineConfig {
  ModelSpec spec;
  int ambient_cutoff = 4;
  TruncationSchedule schedule;
  int q = 2;
  int l = 2;
  std::vector<double> taus{4.0};
  std::size_t agsp_tau = 0;  // index into taus used for the AGSP
  std::vector<int> degrees{2, 4, 8, 16};
  bool validated_profile = true;
  // Appends the smallest tau with eps1^2 <= 1/2 and twice that value to the sweep.
  bool add_gated_taus = true;
  EigenOptions eig;
};

struct PipelineResult {
  ModelSpec spec;
  FockSpace ambient;
  SparseOperator H;
  SpectralData sd;
  BlockDecomposition blocks;
  GrowthProfile formula_profile;
  GrowthProfile profile;
  PartTwoConstants pc;
  std::optional<BosonTruncation> bt;
  std::optional<InteractionTruncation> it;
  std::vector<EnergyCutoff> ecs;
  std::vector<AGSPReport> agsp;
  nlohmann::json manifest;

  PipelineStages stages(std::size_t tau_index) const;
  std::vector<CheckReport> reports() const;
};

PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace bw
