#include "bosonwb/agsp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

#include "bosonwb/bounds.hpp"

namespace bw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool contains_all(const std::vector<int>& region, const std::vector<int>& sup) {
  return std::all_of(sup.begin(), sup.end(),
                     [&](int s) { return std::find(region.begin(), region.end(), s) != region.end(); });
}

bool touches(const std::vector<int>& region, const std::vector<int>& sup) {
  return std::any_of(sup.begin(), sup.end(),
                     [&](int s) { return std::find(region.begin(), region.end(), s) != region.end(); });
}

std::vector<int> join(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a);
  r.insert(r.end(), b.begin(), b.end());
  std::sort(r.begin(), r.end());
  return r;
}

// Applies M (rows x dims[mode]) along one tensor mode; mode 0 is the fastest index.
Vec mode_product(const Vec& x, const std::vector<int>& dims, int mode, const CMat& M) {
  std::size_t inner = 1, outer = 1;
  for (int t = 0; t < mode; ++t) inner *= static_cast<std::size_t>(dims[t]);
  for (std::size_t t = mode + 1; t < dims.size(); ++t) outer *= static_cast<std::size_t>(dims[t]);
  const auto a = static_cast<Eigen::Index>(dims[mode]);
  const auto b = M.rows();
  const auto in = static_cast<Eigen::Index>(inner);
  Vec y(static_cast<Eigen::Index>(inner * outer) * b);
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<const CMat> X(x.data() + o * inner * a, in, a);
    Eigen::Map<CMat> Y(y.data() + o * inner * b, in, b);
    Y.noalias() = X * M.transpose();
  }
  return y;
}

CMat reshape(const Vec& v, std::size_t rows, std::size_t cols) {
  return Eigen::Map<const CMat>(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

int numeric_rank(const Eigen::VectorXd& s, double floor) {
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > floor) ++r;
  return r;
}

double log10_sum(const std::vector<double>& logs) {
  const double mx = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double v : logs) s += std::pow(10.0, v - mx);
  return mx + std::log10(s);
}

}  // namespace

int distance_to_cut(int site, int cut) { return site < cut ? cut - 1 - site : site - cut; }

int TruncationSchedule::cutoff_at(int distance) const {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("schedule: eps0 must lie in (0, 1)");
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("schedule: a and b must be positive");
  const double x = std::abs(distance);
  const double v = std::pow(b, -a) * std::pow(std::log(1.0 / eps0) + std::log(x * x * x + 1.0), a);
  return std::max(n_min, static_cast<int>(std::ceil(v - 1e-12)));
}

std::vector<int> TruncationSchedule::cutoffs(int L, int cut) const {
  std::vector<int> c(L);
  for (int j = 0; j < L; ++j) c[j] = cutoff_at(distance_to_cut(j, cut));
  return c;
}

BlockDecomposition BlockDecomposition::make(int L, int q, int l) {
  if (q < 2 || q % 2 != 0) throw std::invalid_argument("block decomposition: q must be even and >= 2");
  if (l < 1) throw std::invalid_argument("block decomposition: l must be >= 1");
  if (q * l + 2 > L) throw std::invalid_argument("block decomposition: chain too short for q blocks of length l");
  BlockDecomposition d;
  d.L = L;
  d.q = q;
  d.l = l;
  const int start = (L - q * l) / 2;
  d.cut = start + (q / 2) * l;
  d.blocks.resize(q + 2);
  for (int j = 0; j < start; ++j) d.blocks[0].push_back(j);
  for (int s = 1; s <= q; ++s)
    for (int j = 0; j < l; ++j) d.blocks[s].push_back(start + (s - 1) * l + j);
  for (int j = start + q * l; j < L; ++j) d.blocks[q + 1].push_back(j);
  for (int j = std::max(0, start - l); j < start; ++j) d.tilde_first.push_back(j);
  const int first_right = start + q * l;
  for (int j = first_right; j < std::min(L, first_right + l); ++j) d.tilde_last.push_back(j);
  return d;
}

int BlockDecomposition::block_of(int site) const {
  for (std::size_t s = 0; s < blocks.size(); ++s)
    if (std::find(blocks[s].begin(), blocks[s].end(), site) != blocks[s].end()) return static_cast<int>(s);
  throw std::out_of_range("site outside the chain");
}

std::vector<int> BlockDecomposition::left_sites() const {
  std::vector<int> r;
  for (int j = 0; j < cut; ++j) r.push_back(j);
  return r;
}

bool BlockDecomposition::keeps(const std::vector<int>& support) const {
  if (support.empty()) return true;
  int lo = block_of(support.front()), hi = lo;
  for (int s : support) {
    const int b = block_of(s);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  if (lo == hi) return true;
  if (hi - lo > 1) return false;
  if (lo == 0) return contains_all(join(tilde_first, blocks[1]), support);
  if (hi == q + 1) return contains_all(join(blocks[q], tilde_last), support);
  return true;
}

Vec embed_state(const FockSpace& small, const FockSpace& large, const Vec& v) {
  if (small.n_sites() != large.n_sites()) throw std::invalid_argument("embed_state: site counts differ");
  for (int x = 0; x < small.n_sites(); ++x)
    if (small.cutoff(x) > large.cutoff(x)) throw std::invalid_argument("embed_state: cutoff exceeds target space");
  Vec out = Vec::Zero(static_cast<Eigen::Index>(large.dim()));
  for (std::size_t i = 0; i < small.dim(); ++i) {
    std::size_t j = 0;
    for (int x = 0; x < small.n_sites(); ++x) j += static_cast<std::size_t>(small.occupation(i, x)) * large.stride(x);
    out[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Vec restrict_state(const FockSpace& large, const FockSpace& small, const Vec& v) {
  if (small.n_sites() != large.n_sites()) throw std::invalid_argument("restrict_state: site counts differ");
  for (int x = 0; x < small.n_sites(); ++x)
    if (small.cutoff(x) > large.cutoff(x)) throw std::invalid_argument("restrict_state: cutoff exceeds source space");
  Vec out(static_cast<Eigen::Index>(small.dim()));
  for (std::size_t i = 0; i < small.dim(); ++i) {
    std::size_t j = 0;
    for (int x = 0; x < small.n_sites(); ++x) j += static_cast<std::size_t>(small.occupation(i, x)) * large.stride(x);
    out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(j)];
  }
  return out;
}

double state_distance(const Vec& a, const Vec& b) {
  const cplx o = a.dot(b);
  const cplx phase = std::abs(o) > 0.0 ? o / std::abs(o) : cplx(1.0);
  return (phase * a - b).norm();
}

ProjectionLemma projection_lemma(double eps_omega, double eps_h, double gap) {
  ProjectionLemma p;
  p.eps_omega = std::max(0.0, eps_omega);
  p.eps_h = std::max(0.0, eps_h);
  p.applicable = p.eps_omega <= 0.5 && gap > 2.0 * p.eps_h;
  p.displacement_bound =
      p.applicable ? std::sqrt(2.0 * p.eps_omega) + std::sqrt(2.0 * p.eps_h * gap) / (gap - 2.0 * p.eps_h) : INFINITY;
  p.gap_bound = (1.0 - p.eps_omega) * gap - 2.0 * p.eps_h;
  return p;
}

BosonTruncation boson_truncate(const ModelSpec& spec, const FockSpace& ambient, const SparseOperator& H_ambient,
                               const SpectralData& ambient_sd, const std::vector<int>& cutoffs,
                               const EigenOptions& opt) {
  if (static_cast<int>(cutoffs.size()) != ambient.n_sites())
    throw std::invalid_argument("boson_truncate: one cutoff per site expected");
  for (int x = 0; x < ambient.n_sites(); ++x)
    if (cutoffs[x] > ambient.cutoff(x))
      throw std::invalid_argument("boson_truncate: schedule cutoff " + std::to_string(cutoffs[x]) + " at site " +
                                  std::to_string(x) + " exceeds the ambient cutoff " +
                                  std::to_string(ambient.cutoff(x)));
  BosonTruncation r;
  r.report.name = "boson_truncation";
  r.space = FockSpace(cutoffs);
  r.H_bar = build_hamiltonian(spec, r.space);
  r.sd = ground_state(r.H_bar, opt);
  r.ground_ambient = embed_state(r.space, ambient, r.sd.ground);
  r.displacement = state_distance(ambient_sd.ground, r.ground_ambient);
  r.gap_ratio = ambient_sd.gap > 0.0 ? r.sd.gap / ambient_sd.gap : 0.0;
  for (int x = 0; x < ambient.n_sites(); ++x)
    if (cutoffs[x] < ambient.cutoff(x))
      r.tail_chain += std::sqrt(tail_probability(ambient_sd.ground, ambient, x, cutoffs[x] + 1));

  const Vec c = restrict_state(ambient, r.space, ambient_sd.ground);
  const double w = c.squaredNorm();
  const double eh = w > 0.0 ? (c.dot(r.H_bar.apply(c)).real() / w - ambient_sd.E0) : INFINITY;
  r.lemma = projection_lemma(1.0 - w, eh, ambient_sd.gap);
  (void)H_ambient;

  auto& rep = r.report;
  rep.extra["cutoffs"] = cutoffs;
  rep.extra["dim"] = r.space.dim();
  rep.extra["eps_omega"] = r.lemma.eps_omega;
  rep.extra["eps_h"] = r.lemma.eps_h;
  rep.extra["gap_ambient"] = ambient_sd.gap;
  rep.extra["gap_truncated"] = r.sd.gap;
  if (!(ambient_sd.gap > 0.0)) {
    rep.refuse("ambient ground state is degenerate");
    return r;
  }
  if (r.lemma.applicable) {
    rep.add("displacement <= projection-lemma bound", r.displacement, r.lemma.displacement_bound, 1e-8, 1e-10);
    rep.add("projection-lemma gap bound <= truncated gap", r.lemma.gap_bound, r.sd.gap, 1e-8, 1e-10);
  } else {
    rep.info("projection lemma not applicable (eps_omega, eps_h)", r.lemma.eps_omega, r.lemma.eps_h);
  }
  if (r.lemma.applicable && r.lemma.gap_bound >= 0.75 * ambient_sd.gap)
    rep.add("3/4 gap <= truncated gap", 0.75 * ambient_sd.gap, r.sd.gap, 1e-8, 1e-10);
  else
    rep.info("3/4 gap vs truncated gap (outside the small-eps0 regime)", 0.75 * ambient_sd.gap, r.sd.gap);
  rep.info("displacement vs sum of site tails", r.displacement, r.tail_chain);
  return r;
}

GrowthProfile validated_growth_profile(const ModelSpec& spec, const FockSpace& space, int cut, GrowthProfile formula,
                                       double alpha_bar) {
  const auto groups = group_by_support(spec);
  std::vector<double> norms(groups.size(), 0.0);
  for (std::size_t z = 0; z < groups.size(); ++z) {
    if (groups[z].first.size() < 2) continue;
    const auto h = support_operator(groups[z].second, groups[z].first, space);
    norms[z] = hermitian_norm(as_linear(h));
  }
  const int L = spec.n_sites;
  int xmax = 0;
  for (int j = 0; j < L; ++j) xmax = std::max(xmax, distance_to_cut(j, cut));
  double need = formula.g0;
  for (int x = 0; x <= xmax; ++x) {
    auto inside = [&](int j) { return distance_to_cut(j, cut) <= x; };
    double R = 0.0;
    for (int i = 0; i < L; ++i) {
      for (int j = i + 1; j < L; ++j) {
        if (!inside(i) || !inside(j)) continue;
        double s = 0.0;
        for (std::size_t z = 0; z < groups.size(); ++z) {
          const auto& sup = groups[z].first;
          if (!std::all_of(sup.begin(), sup.end(), inside)) continue;
          if (std::count(sup.begin(), sup.end(), i) && std::count(sup.begin(), sup.end(), j)) s += norms[z];
        }
        R = std::max(R, s / decay_profile(j - i, alpha_bar));
      }
    }
    need = std::max(need, R - formula.g1 * std::pow(std::log(x + 1.0), formula.chi));
  }
  GrowthProfile g = formula;
  g.g0 = need;
  return g;
}

InteractionTruncation interaction_truncate(const ModelSpec& spec, const FockSpace& space, const BosonTruncation& bt,
                                           const BlockDecomposition& blocks, const PartTwoConstants& pc,
                                           const EigenOptions& opt) {
  if (blocks.q < 2 || blocks.q % 2 != 0) throw std::invalid_argument("interaction_truncate: q must be even and >= 2");
  if (blocks.L != space.n_sites()) throw std::invalid_argument("interaction_truncate: block layout does not fit space");
  InteractionTruncation r;
  auto& rep = r.report;
  rep.name = "interaction_truncation";
  auto keep = [&](const std::vector<int>& sup) { return blocks.keeps(sup); };
  r.H_t = build_hamiltonian_filtered(spec, space, keep);
  const SparseOperator dH(SpMat(bt.H_bar.mat - r.H_t.mat), true, "dH");
  r.dH_norm = dH.nnz() == 0 ? 0.0 : hermitian_norm(as_linear(dH));
  r.sd = ground_state(r.H_t, opt);
  r.displacement = state_distance(bt.sd.ground, r.sd.ground);

  // h_{s,s+1}: kept terms that touch both blocks.
  const auto groups = group_by_support(spec);
  for (int s = 0; s <= blocks.q; ++s) {
    std::vector<int> region = join(s == 0 ? blocks.tilde_first : blocks.blocks[s],
                                   s == blocks.q ? blocks.tilde_last : blocks.blocks[s + 1]);
    std::vector<TermSpec> terms;
    for (const auto& [sup, ts] : groups)
      if (keep(sup) && touches(blocks.blocks[s], sup) && touches(blocks.blocks[s + 1], sup) && contains_all(region, sup))
        terms.insert(terms.end(), ts.begin(), ts.end());
    double n = 0.0;
    if (!terms.empty()) n = hermitian_norm(as_linear(support_operator(terms, region, space)));
    r.coupling_norms.push_back(n);
  }

  rep.extra["dH_norm"] = r.dH_norm;
  rep.extra["gap_bar"] = bt.sd.gap;
  rep.extra["gap_t"] = r.sd.gap;
  rep.extra["coupling_norms"] = r.coupling_norms;
  rep.extra["eta1"] = pc.eta1;
  rep.extra["eta2"] = pc.eta2;
  if (!spec.long_range) rep.hypothesis_note = "finite-range model; truncation drops no term when l covers the range";
  rep.add("||H_bar - H_t|| <= truncation bound", r.dH_norm, pc.interaction_truncation_bound(), 1e-6, 1e-12);
  rep.add("gap_bar - 2||dH|| <= gap_t", bt.sd.gap - 2.0 * r.dH_norm, r.sd.gap, 1e-8, 1e-10);
  if (4.0 * r.dH_norm < bt.sd.gap)
    rep.add("ground displacement <= ||dH|| / (gap_bar - 4||dH||)", r.displacement,
            r.dH_norm / (bt.sd.gap - 4.0 * r.dH_norm), 1e-6, 1e-9);
  else
    rep.info("ground displacement (4||dH|| >= gap_bar)", r.displacement, INFINITY);
  for (std::size_t s = 0; s < r.coupling_norms.size(); ++s)
    rep.add("||h_{" + std::to_string(s) + "," + std::to_string(s + 1) + "}|| <= c0 gbar_{ql}", r.coupling_norms[s],
            pc.block_coupling_bound(), 1e-6);
  return r;
}

std::size_t BlockIsometry::full_dim() const {
  std::size_t d = 1;
  for (int v : full_dims) d *= static_cast<std::size_t>(v);
  return d;
}

std::size_t BlockIsometry::kept_dim() const {
  std::size_t d = 1;
  for (int v : kept_dims) d *= static_cast<std::size_t>(v);
  return d;
}

Vec BlockIsometry::up(const Vec& c) const {
  std::vector<int> dims = kept_dims;
  Vec x = c;
  for (std::size_t s = 0; s < W.size(); ++s) {
    x = mode_product(x, dims, static_cast<int>(s), W[s]);
    dims[s] = full_dims[s];
  }
  return x;
}

Vec BlockIsometry::down(const Vec& v) const {
  std::vector<int> dims = full_dims;
  Vec x = v;
  for (std::size_t s = 0; s < W.size(); ++s) {
    x = mode_product(x, dims, static_cast<int>(s), W[s].adjoint());
    dims[s] = kept_dims[s];
  }
  return x;
}

std::pair<std::size_t, std::size_t> BlockIsometry::split(int last_left) const {
  std::size_t a = 1, b = 1;
  for (std::size_t s = 0; s < kept_dims.size(); ++s)
    (static_cast<int>(s) <= last_left ? a : b) *= static_cast<std::size_t>(kept_dims[s]);
  return {a, b};
}

EnergyCutoff energy_cutoff(const ModelSpec& spec, const FockSpace& space, const InteractionTruncation& it,
                           const BlockDecomposition& blocks, double tau, const PartTwoConstants& pc) {
  EnergyCutoff r;
  auto& rep = r.report;
  rep.name = "energy_cutoff";
  r.tau = tau;
  if (!(tau >= 0.0)) throw std::invalid_argument("energy_cutoff: tau must be non-negative");
  for (const auto& b : blocks.blocks) {
    const FockSpace bs = space.slice(b.front(), static_cast<int>(b.size()));
    if (bs.dim() > kDenseProjectorBudget)
      throw std::invalid_argument("energy_cutoff: block dimension " + std::to_string(bs.dim()) +
                                  " exceeds the dense diagonalization budget");
    const auto hs = region_hamiltonian(spec, space, b, true);
    const auto eig = dense_eigh(hs.dense());
    const double E0 = eig.values[0];
    int kept = 0;
    while (kept < eig.values.size() && eig.values[kept] <= E0 + tau + 1e-12 * std::max(1.0, std::abs(E0))) ++kept;
    r.block_E0.push_back(E0);
    r.block_tau.push_back(E0 + tau);
    r.block_kept.push_back(kept);
    r.iso.full_dims.push_back(static_cast<int>(bs.dim()));
    r.iso.kept_dims.push_back(kept);
    r.iso.W.push_back(eig.vectors.leftCols(kept));
  }
  rep.extra["tau"] = tau;
  rep.extra["block_E0"] = r.block_E0;
  rep.extra["block_kept"] = r.block_kept;
  rep.extra["kept_dim"] = r.iso.kept_dim();
  rep.extra["full_dim"] = r.iso.full_dim();
  if (r.iso.kept_dim() < 2) {
    rep.refuse("tau leaves fewer than two compressed states; the cutoff would remove the low-energy sector");
    return r;
  }

  const auto Ht = std::make_shared<const SparseOperator>(it.H_t);
  const BlockIsometry iso = r.iso;
  r.H_compressed = LinearOperator{iso.kept_dim(), [Ht, iso](const Vec& c, Vec& y) { y = iso.down(Ht->apply(iso.up(c))); }};
  EigenOptions opt;
  opt.dense_threshold = kCompressedDenseLimit;
  r.sd = ground_state(r.H_compressed, opt);
  r.ground_full = iso.up(r.sd.ground);
  r.displacement = state_distance(it.sd.ground, r.ground_full);
  const double E0c = r.sd.E0;
  const auto& Hc = r.H_compressed;
  r.width = hermitian_norm(LinearOperator{Hc.dim, [&Hc, E0c](const Vec& x, Vec& y) {
                                            Hc.apply(x, y);
                                            y -= E0c * x;
                                          }});

  const Vec c = iso.down(it.sd.ground);
  const double w = c.squaredNorm();
  double eh = INFINITY;
  if (w > 0.0) {
    Vec hc;
    Hc.apply(c, hc);
    eh = c.dot(hc).real() / w - it.sd.E0;
  }
  r.lemma = projection_lemma(1.0 - w, eh, it.sd.gap);
  r.eps1 = pc.eps1(tau);
  r.eps2 = pc.eps2(tau);

  rep.extra["gap_t"] = it.sd.gap;
  rep.extra["gap_tilde"] = r.sd.gap;
  rep.extra["width"] = r.width;
  rep.extra["eps1"] = r.eps1;
  rep.extra["eps2"] = r.eps2;
  rep.extra["eps_omega"] = r.lemma.eps_omega;
  rep.extra["eps_h"] = r.lemma.eps_h;
  rep.extra["mu1"] = pc.mu1.value;
  rep.extra["mu2"] = pc.mu2.value;

  if (r.lemma.applicable) {
    rep.add("displacement <= projection-lemma bound", r.displacement, r.lemma.displacement_bound, 1e-8, 1e-10);
    rep.add("projection-lemma gap bound <= compressed gap", r.lemma.gap_bound, r.sd.gap, 1e-8, 1e-10);
  } else {
    rep.info("projection lemma not applicable (eps_omega, eps_h)", r.lemma.eps_omega, r.lemma.eps_h);
  }
  double coupling_sum = 0.0;
  for (double v : it.coupling_norms) coupling_sum += v;
  const double q = blocks.q;
  rep.add("||H~ - E~0|| <= (q+2) tau + 2 sum ||h_{s,s+1}||", r.width, (q + 2.0) * tau + 2.0 * coupling_sum, 1e-6);
  rep.add("||H~ - E~0|| <= 2q (tau + 2 c0 gbar_{ql})", r.width, pc.compressed_norm_bound(tau), 1e-6);
  rep.info("tau vs gbar_{ql} ql (area-law regime)", tau, pc.gbar(pc.ql()) * pc.ql());
  rep.add("quadrature error of mu1 (relative)", pc.mu1.error / pc.mu1.value, 1e-6, 0.0);
  rep.add("quadrature error of mu2 (relative)", pc.mu2.error / pc.mu2.value, 1e-6, 0.0);
  if (r.eps1 * r.eps1 <= 0.5) {
    rep.add("high-energy weight <= eps1", std::sqrt(r.lemma.eps_omega), r.eps1, 1e-8, 1e-10);
    rep.add("displacement <= energy-cutoff bound", r.displacement, pc.displacement_bound(tau, it.sd.gap), 1e-8, 1e-10);
    rep.add("energy-cutoff gap bound <= compressed gap", pc.gap_bound(tau, it.sd.gap), r.sd.gap, 1e-8, 1e-10);
  } else {
    rep.info("eps1^2 > 1/2: energy-cutoff bounds skipped", r.eps1 * r.eps1, 0.5);
  }
  return r;
}

ChebyshevAGSP::ChebyshevAGSP(LinearOperator h, double E0, double gap, double width, int m)
    : h_(std::move(h)), E0_(E0), gap_(gap), width_(width), m_(m) {
  if (m < 1) throw std::invalid_argument("chebyshev AGSP: degree must be >= 1");
  if (!(gap > 0.0)) throw std::invalid_argument("chebyshev AGSP: gap must be positive");
  if (!(width > gap)) throw std::invalid_argument("chebyshev AGSP: width must exceed the gap");
  y0_ = -(width_ + gap_) / (width_ - gap_);
  rho_.resize(m_);
  rho_[0] = 1.0 / y0_;
  for (int j = 1; j < m_; ++j) rho_[j] = 1.0 / (2.0 * y0_ - rho_[j - 1]);
}

void ChebyshevAGSP::apply(const Vec& x, Vec& y) const {
  const double s = 2.0 / (width_ - gap_);
  const double shift = (width_ + gap_) / (width_ - gap_);
  Vec t;
  auto A = [&](const Vec& v) {
    h_.apply(v, t);
    return Vec(s * (t - E0_ * v) - shift * v);
  };
  Vec prev = x;
  Vec cur = rho_[0] * A(x);
  for (int j = 1; j < m_; ++j) {
    Vec next = 2.0 * rho_[j] * A(cur) - (rho_[j - 1] * rho_[j]) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  y = std::move(cur);
}

Vec ChebyshevAGSP::apply(const Vec& x) const {
  Vec y;
  apply(x, y);
  return y;
}

LinearOperator ChebyshevAGSP::as_operator() const {
  const ChebyshevAGSP self = *this;
  return LinearOperator{h_.dim, [self](const Vec& x, Vec& y) { self.apply(x, y); }};
}

double ChebyshevAGSP::scalar(double x) const {
  const double a = (2.0 * x - (width_ + gap_)) / (width_ - gap_);
  double prev = 1.0, cur = rho_[0] * a;
  for (int j = 1; j < m_; ++j) {
    const double next = 2.0 * rho_[j] * a * cur - rho_[j - 1] * rho_[j] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double ChebyshevAGSP::log_denominator() const {
  const double t = std::acosh(std::abs(y0_));
  return m_ * t + std::log((1.0 + std::exp(-2.0 * m_ * t)) / 2.0);
}

double ChebyshevAGSP::error_bound() const { return 2.0 * std::exp(-2.0 * m_ * std::sqrt(gap_ / width_)); }

ChebyshevAGSP chebyshev_agsp(const LinearOperator& h, double E0, double gap, int m, double width) {
  if (!(width > 0.0)) {
    const LinearOperator shifted{h.dim, [&h, E0](const Vec& x, Vec& y) {
                                   h.apply(x, y);
                                   y -= E0 * x;
                                 }};
    width = 1.01 * hermitian_norm(shifted);
  }
  return ChebyshevAGSP(h, E0, gap, width, m);
}

double log10_schmidt_rank_bound(int m, int q, int l, int k, int d) {
  const double dl = std::pow(2.0 * d * l, k);
  std::vector<double> terms;
  for (int j = 0; j <= m; ++j) {
    const double a = j * std::log10(2.0 + dl);
    const double b = q * l * std::log10(d) + (q + 1.0) * std::log10(q + j + 1.0) +
                     j / (q + 1.0) * std::log10(std::exp(1.0) * (q + 1.0) * (q + 1.0) * dl);
    terms.push_back(std::min(a, b));
  }
  return log10_sum(terms);
}

AGSPReport agsp_certificate(const LinearOperator& K, int m, double eps_bound, const PipelineStages& st,
                            std::size_t operator_rank_limit) {
  if (!st.ec || !st.bt || !st.it || !st.ambient || !st.ambient_sd || !st.blocks || !st.spec)
    throw std::invalid_argument("agsp_certificate: incomplete pipeline stages");
  const auto& ec = *st.ec;
  const auto& iso = ec.iso;
  const auto& blocks = *st.blocks;
  AGSPReport r;
  r.m = m;
  r.eps_bound = eps_bound;
  auto& rep = r.report;
  rep.name = "agsp_m" + std::to_string(m);
  if (K.dim != iso.kept_dim()) throw std::invalid_argument("agsp_certificate: K does not act on the compressed space");

  const Vec& g = ec.sd.ground;
  Vec Kg;
  K.apply(g, Kg);
  r.fixes_ground = (Kg - g).norm();
  const LinearOperator excited{K.dim, [&K, &g](const Vec& x, Vec& y) { K.apply(Vec(x - g * g.dot(x)), y); }};
  r.eps_K = K.dim > 1 ? hermitian_norm(excited, 1e-12) : 0.0;

  auto to_ambient = [&](const Vec& c) { return embed_state(st.bt->space, *st.ambient, iso.up(c)); };
  r.delta_K = state_distance(st.ambient_sd->ground, to_ambient(g));
  r.delta_chain = st.bt->displacement + st.it->displacement + ec.displacement;

  const auto [left, right] = iso.split(blocks.q / 2);
  Eigen::JacobiSVD<CMat> svd(reshape(g, left, right), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMat top = svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
  const Vec phi = Eigen::Map<const Vec>(top.data(), top.size());
  Vec Kphi;
  K.apply(phi, Kphi);
  const double kn = Kphi.norm();
  Eigen::JacobiSVD<CMat> sk(reshape(Kphi / kn, left, right));
  r.schmidt_rank_state = numeric_rank(sk.singularValues(), 1e-10);

  if (K.dim <= operator_rank_limit) {
    CMat Kd(K.dim, K.dim);
    Vec e = Vec::Zero(K.dim), col;
    for (std::size_t j = 0; j < K.dim; ++j) {
      e.setZero();
      e[j] = 1.0;
      K.apply(e, col);
      Kd.col(j) = col;
    }
    // rows (iL, jL), columns (iR, jR)
    CMat R(left * left, right * right);
    for (std::size_t iR = 0; iR < right; ++iR)
      for (std::size_t iL = 0; iL < left; ++iL)
        for (std::size_t jR = 0; jR < right; ++jR)
          for (std::size_t jL = 0; jL < left; ++jL)
            R(iL + left * jL, iR + right * jR) = Kd(iL + left * iR, jL + left * jR);
    Eigen::JacobiSVD<CMat> so(R);
    const auto& s = so.singularValues();
    r.schmidt_rank_operator = numeric_rank(s, 1e-10 * std::max(1.0, s[0]));
  }

  int d = 1;
  for (int s = 1; s <= blocks.q; ++s)
    for (int j : blocks.blocks[s]) d = std::max(d, st.bt->space.cutoff(j) + 1);
  r.log10_D_theory = log10_schmidt_rank_bound(m, blocks.q, blocks.l, st.spec->k, d);

  rep.extra["m"] = m;
  rep.extra["delta_K"] = r.delta_K;
  rep.extra["delta_chain"] = r.delta_chain;
  rep.extra["eps_K"] = r.eps_K;
  rep.extra["eps_bound"] = eps_bound;
  rep.extra["schmidt_rank_state"] = r.schmidt_rank_state;
  rep.extra["schmidt_rank_operator"] = r.schmidt_rank_operator;
  rep.extra["log10_D_theory"] = r.log10_D_theory;
  rep.extra["local_dim"] = d;

  rep.add("||K (1 - P)|| <= Chebyshev bound", r.eps_K, eps_bound, 1e-8, 1e-12);
  rep.add("||K Omega~ - Omega~||", r.fixes_ground, 0.0, 0.0, 1e-8);
  rep.add("delta_K <= sum of stage displacements", r.delta_K, r.delta_chain, 1e-8, 1e-10);
  rep.add("log10 SR(K phi) <= log10 D_K bound", std::log10(r.schmidt_rank_state), r.log10_D_theory, 1e-12);
  if (r.schmidt_rank_operator > 0)
    rep.add("log10 SR(K) <= log10 D_K bound", std::log10(r.schmidt_rank_operator), r.log10_D_theory, 1e-12);

  // Bootstrap: D is the measured operator Schmidt rank, a valid D_K for this K.
  if (r.schmidt_rank_operator > 0) {
    const double D = r.schmidt_rank_operator;
    r.bootstrap_condition = r.eps_K * r.eps_K * D <= 0.5;
    r.bootstrap_distance = state_distance(st.ambient_sd->ground, to_ambient(Kphi / kn));
    r.bootstrap_bound = r.eps_K * std::sqrt(2.0 * D) + r.delta_K;
    rep.extra["bootstrap_D"] = D;
    if (r.bootstrap_condition)
      rep.add("bootstrap ||psi - Omega|| <= eps sqrt(2D) + delta", r.bootstrap_distance, r.bootstrap_bound, 1e-8,
              1e-10);
    else
      rep.info("bootstrap condition eps^2 D <= 1/2 fails", r.eps_K * r.eps_K * D, 0.5);
  } else {
    rep.info("bootstrap skipped: operator Schmidt rank above budget", static_cast<double>(K.dim),
             static_cast<double>(operator_rank_limit));
  }
  return r;
}

AGSPReport agsp_certificate(const ChebyshevAGSP& K, const PipelineStages& st, std::size_t operator_rank_limit) {
  auto r = agsp_certificate(K.as_operator(), K.degree(), K.error_bound(), st, operator_rank_limit);
  r.report.extra["width"] = K.width();
  r.report.extra["gap"] = K.gap();
  r.report.extra["log_denominator"] = K.log_denominator();
  const double w = st.ec->width;
  if (w > 0.0)
    r.report.add("||K (1 - P)|| <= Chebyshev bound at the measured norm", r.eps_K,
                 2.0 * std::exp(-2.0 * K.degree() * std::sqrt(K.gap() / w)), 1e-8, 1e-12);
  return r;
}

Status bootstrap_check(const AGSPReport& r) {
  if (r.schmidt_rank_operator <= 0) return Status::Skipped;
  if (!r.bootstrap_condition) return Status::HypothesisFailure;
  return r.bootstrap_distance <= r.bootstrap_bound * (1.0 + 1e-8) + 1e-10 ? Status::Pass : Status::BoundViolation;
}

PipelineStages PipelineResult::stages(std::size_t tau_index) const {
  PipelineStages s;
  s.spec = &spec;
  s.ambient = &ambient;
  s.ambient_sd = &sd;
  s.bt = bt ? &*bt : nullptr;
  s.it = it ? &*it : nullptr;
  s.ec = tau_index < ecs.size() ? &ecs[tau_index] : nullptr;
  s.blocks = &blocks;
  return s;
}

std::vector<CheckReport> PipelineResult::reports() const {
  std::vector<CheckReport> r;
  if (bt) r.push_back(bt->report);
  if (it) r.push_back(it->report);
  for (const auto& e : ecs) r.push_back(e.report);
  for (const auto& a : agsp) r.push_back(a.report);
  return r;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const auto t0 = Clock::now();
  PipelineResult res;
  auto& man = res.manifest;
  res.spec = cfg.spec;
  const auto& spec = res.spec;
  spec.validate();
  res.blocks = BlockDecomposition::make(spec.n_sites, cfg.q, cfg.l);
  res.ambient = FockSpace::uniform(spec.n_sites, cfg.ambient_cutoff);
  res.H = build_hamiltonian(spec, res.ambient);
  res.sd = ground_state(res.H, cfg.eig);
  man["ambient"] = {{"dim", res.ambient.dim()}, {"E0", res.sd.E0}, {"gap", res.sd.gap}, {"solver", res.sd.meta.method}};
  man["timings"]["ambient"] = seconds_since(t0);

  auto t = Clock::now();
  const auto cutoffs = cfg.schedule.cutoffs(spec.n_sites, res.blocks.cut);
  res.bt = boson_truncate(spec, res.ambient, res.H, res.sd, cutoffs, cfg.eig);
  man["timings"]["boson_truncation"] = seconds_since(t);

  t = Clock::now();
  const auto mc = extract_constants(spec);
  res.formula_profile = growth_profile(mc.g, cfg.schedule.a, cfg.schedule.b, spec.k, cfg.schedule.eps0);
  res.profile = cfg.validated_profile
                    ? validated_growth_profile(spec, res.bt->space, res.blocks.cut, res.formula_profile, mc.alpha_bar)
                    : res.formula_profile;
  res.pc = part_two_constants(spec.k, mc.alpha_bar, res.profile.chi, res.profile, cfg.q, cfg.l);
  man["constants"] = res.pc.to_json();
  man["constants"]["g"] = mc.g;
  man["constants"]["g0_formula"] = res.formula_profile.g0;
  man["timings"]["constants"] = seconds_since(t);

  t = Clock::now();
  res.it = interaction_truncate(spec, res.bt->space, *res.bt, res.blocks, res.pc, cfg.eig);
  man["timings"]["interaction_truncation"] = seconds_since(t);

  std::vector<double> taus = cfg.taus;
  if (cfg.add_gated_taus) {
    const double t1 = res.pc.tau_for_eps1(std::sqrt(0.5));
    if (std::isfinite(t1)) {
      taus.push_back(t1);
      taus.push_back(2.0 * t1);
    }
  }
  t = Clock::now();
  for (double tau : taus) res.ecs.push_back(energy_cutoff(spec, res.bt->space, *res.it, res.blocks, tau, res.pc));
  man["timings"]["energy_cutoff"] = seconds_since(t);

  t = Clock::now();
  if (cfg.agsp_tau < res.ecs.size() && res.ecs[cfg.agsp_tau].report.hypothesis_ok) {
    const auto st = res.stages(cfg.agsp_tau);
    const auto& ec = res.ecs[cfg.agsp_tau];
    for (int m : cfg.degrees) {
      const auto K = chebyshev_agsp(ec.H_compressed, ec.sd.E0, ec.sd.gap, m, 1.01 * ec.width);
      res.agsp.push_back(agsp_certificate(K, st));
    }
  }
  man["timings"]["agsp"] = seconds_since(t);

  man["blocks"] = res.blocks.blocks;
  man["cut"] = res.blocks.cut;
  man["schedule"] = {{"eps0", cfg.schedule.eps0}, {"a", cfg.schedule.a}, {"b", cfg.schedule.b}, {"cutoffs", cutoffs}};
  man["taus"] = taus;
  for (const auto& rep : res.reports()) man["reports"].push_back(rep.to_json());
  man["status"] = status_name(combine(res.reports()));
  man["timings"]["total"] = seconds_since(t0);
  return res;
}

}  // namespace bw
