#include "bosonwb/cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <stdexcept>

#include "CLI11.hpp"
#include "bosonwb/agsp.hpp"
#include "bosonwb/bounds.hpp"
#include "bosonwb/coefficients.hpp"
#include "bosonwb/entanglement.hpp"
#include "bosonwb/kernels.hpp"

namespace bw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.3.0";

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json versions() {
  return {{"bosonwb", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"threads", kernels::max_threads()}};
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << j.dump(2) << "\n";
}

class Csv {
 public:
  Csv(const fs::path& p, const std::vector<std::string>& header) : f_(p) {
    if (!f_) throw std::runtime_error("cannot write " + p.string());
    f_.precision(17);
    for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
    f_ << "\n";
  }
  template <class... T>
  void row(const T&... v) {
    int i = 0;
    ((f_ << (i++ ? "," : "") << v), ...);
    f_ << "\n";
  }

 private:
  std::ofstream f_;
};

json spectral_json(const SpectralData& sd) {
  json low = json::array();
  for (auto [v, r] : sd.low_eigs) low.push_back({{"value", v}, {"residual", r}});
  return {{"E0", sd.E0},
          {"gap", sd.gap},
          {"degenerate", sd.degenerate},
          {"low_eigs", low},
          {"solver",
           {{"method", sd.meta.method},
            {"iterations", sd.meta.iterations},
            {"restarts", sd.meta.restarts},
            {"tol", sd.meta.tol},
            {"converged", sd.meta.converged}}}};
}

json base_manifest(const RunConfig& c, const std::string& command) {
  return {{"command", command}, {"config", to_json(c)}, {"versions", versions()}};
}

SpectralData solve(const RunConfig& c, const ModelSpec& spec, const FockSpace& space) {
  return ground_state(build_hamiltonian(spec, space), c.solver);
}

Status finish(json& man, const std::vector<CheckReport>& reps) {
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(r.to_json());
  man["reports"] = arr;
  const Status s = combine(reps);
  man["status"] = status_name(s);
  return s;
}

}  // namespace

int exit_code(Status s) {
  switch (s) {
    case Status::Pass:
    case Status::Skipped: return kOk;
    case Status::BoundViolation: return kViolation;
    case Status::HypothesisFailure: return kHypothesis;
  }
  return kUsage;
}

RunLock::RunLock(const fs::path& dir) : file_(dir / ".lock") {
  fs::create_directories(dir);
  std::FILE* f = std::fopen(file_.c_str(), "wx");
  if (!f) {
    std::string owner;
    std::ifstream in(file_);
    std::getline(in, owner);
    throw std::invalid_argument("run directory " + dir.string() + " is locked by process " + owner);
  }
  std::fprintf(f, "%d\n", static_cast<int>(getpid()));
  std::fclose(f);
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(file_, ec);
}

CommandResult cmd_solve(const RunConfig& c, const fs::path& out) {
  const auto t0 = Clock::now();
  enforce_budget(c, "solve");
  const auto spec = build_model(c.model);
  const auto space = build_space(c);
  const auto sd = solve(c, spec, space);
  CommandResult r;
  r.manifest = base_manifest(c, "solve");
  r.manifest["dim"] = space.dim();
  r.manifest["spectral"] = spectral_json(sd);
  Csv csv(out / "spectrum.csv", {"index", "energy", "residual"});
  for (std::size_t i = 0; i < sd.low_eigs.size(); ++i) csv.row(i, sd.low_eigs[i].first, sd.low_eigs[i].second);
  r.manifest["timings"]["total"] = since(t0);
  r.manifest["status"] = status_name(Status::Pass);
  return r;
}

CommandResult cmd_tail(const RunConfig& c, const fs::path& out) {
  const auto t0 = Clock::now();
  enforce_budget(c, "tail");
  const auto spec = build_model(c.model);
  const auto space = build_space(c);
  if (c.tail.site < 0 || c.tail.site >= space.n_sites()) throw std::invalid_argument("tail.site out of range");
  const auto sd = solve(c, spec, space);
  const auto curve = tail_curve(sd.ground, space, c.tail.site);
  CommandResult r;
  r.manifest = base_manifest(c, "tail");
  r.manifest["spectral"] = spectral_json(sd);
  {
    Csv csv(out / "tail.csv", {"N", "p_greater"});
    for (auto [n, p] : curve) csv.row(n, p);
  }
  const auto fit = fit_concentration(curve, c.tail.floor);
  const json f = {{"a", fit.a},           {"inv_a", fit.inv_a()}, {"b", fit.b},
                  {"c", fit.c},           {"n_min", fit.n_min},   {"n_max", fit.n_max},
                  {"residual", fit.residual}, {"floor", fit.floor}, {"points", fit.points}};
  write_json(out / "fit.json", f);
  r.manifest["fit"] = f;
  r.manifest["timings"]["total"] = since(t0);
  r.manifest["status"] = status_name(Status::Pass);
  return r;
}

std::vector<std::string> suite_check_names() {
  return {"commutator", "lambda",  "double_commutator", "binomial", "sequence",
          "hopping",    "tradeoff", "concentration",    "moments",  "subset_energy"};
}

CommandResult cmd_suite(const RunConfig& c, const fs::path& out, const std::vector<std::string>& checks) {
  const auto t0 = Clock::now();
  enforce_budget(c, "suite");
  const auto spec = build_model(c.model);
  const auto space = build_space(c);
  const auto H = build_hamiltonian(spec, space);
  const auto sd = ground_state(H, c.solver);
  const auto& S = c.suite;

  std::map<std::string, std::function<std::vector<CheckReport>()>> all;
  all["commutator"] = [&] { return std::vector{commutator_identity_check(S.commutator_max, S.commutator_max)}; };
  all["lambda"] = [&] {
    return std::vector{lambda_bound_check(S.lambda_max), lambda_expansion_check(std::min(4, S.lambda_max))};
  };
  all["double_commutator"] = [&] { return std::vector{phi_double_commutator_check(4)}; };
  all["binomial"] = [&] { return std::vector{binomial_lemma_check(24)}; };
  all["sequence"] = [&] {
    return std::vector{sequence_lemma_check({1.0, 2.0, 3.5, 1.5, 4.0, 2.5, 3.0, 1.0}, 0.2, 50, c.seed)};
  };
  all["hopping"] = [&] {
    std::vector<int> sites;
    for (int x = 0; x < std::min(space.n_sites(), 3); ++x) sites.push_back(x);
    const int split = static_cast<int>(sites.size()) / 2;
    std::vector<CheckReport> r;
    if (space.dim() <= 4096) r.push_back(hopping_inequality_check(space, sites, split));
    return r;
  };
  all["tradeoff"] = [&] {
    std::vector<CheckReport> r;
    if (S.tradeoff_instances > 0) r.push_back(random_tradeoff_check(S.tradeoff_instances, 200, c.seed));
    const auto h = as_linear(H);
    for (int x = 0; x < space.n_sites(); ++x) {
      if (spec.family == Family::Phi4Class) {
        for (int m = 1; m <= 4; ++m) {
          const auto o = power(phi_op(space, x), m);
          r.push_back(tradeoff_check(h, sd, as_linear(o), "phi_" + std::to_string(x) + "^" + std::to_string(m)));
        }
      } else {
        r.push_back(tradeoff_check(h, sd, as_linear(number_op(space, x)), "n_" + std::to_string(x)));
      }
    }
    return r;
  };
  all["concentration"] = [&] {
    std::vector<CheckReport> r;
    if (spec.family == Family::BoseHubbardClass) r.push_back(bh_concentration_check(spec, space, sd));
    if (spec.family == Family::Phi4Class) r.push_back(phi4_concentration_check(spec, space, sd));
    return r;
  };
  all["moments"] = [&] {
    std::vector<CheckReport> r;
    if (spec.family != Family::Explicit) r.push_back(moment_suite(spec, space, sd, S.s_max));
    return r;
  };
  all["subset_energy"] = [&] {
    std::vector<CheckReport> r;
    if (space.n_sites() >= 2) {
      std::vector<int> all_sites;
      for (int x = 0; x < space.n_sites(); ++x) all_sites.push_back(x);
      r.push_back(subset_energy_check(spec, space, {0}, all_sites));
    }
    return r;
  };

  std::vector<std::string> names;
  for (const auto& n : checks) {
    if (n == "all") {
      names = suite_check_names();
      break;
    }
    if (!all.count(n)) throw std::invalid_argument("unknown check '" + n + "'");
    names.push_back(n);
  }
  std::vector<std::vector<CheckReport>> results(names.size());
  std::vector<std::string> errors(names.size());
  std::vector<double> times(names.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    const auto ti = Clock::now();
    try {
      results[i] = all[names[i]]();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
    times[i] = since(ti);
  }
  CommandResult r;
  r.manifest = base_manifest(c, "suite");
  r.manifest["spectral"] = spectral_json(sd);
  std::vector<CheckReport> reps;
  Csv csv(out / "suite.csv", {"check", "report", "status", "rows", "violations"});
  for (std::size_t i = 0; i < names.size(); ++i) {
    r.manifest["timings"][names[i]] = times[i];
    if (!errors[i].empty()) {
      CheckReport e;
      e.name = names[i];
      e.refuse("error: " + errors[i]);
      results[i].push_back(e);
    }
    for (const auto& rep : results[i]) {
      csv.row(names[i], rep.name, status_name(rep.status()), rep.rows.size(), rep.violations());
      reps.push_back(rep);
    }
  }
  r.status = finish(r.manifest, reps);
  r.manifest["timings"]["total"] = since(t0);
  return r;
}

CommandResult cmd_agsp(const RunConfig& c, const fs::path& out) {
  const auto t0 = Clock::now();
  enforce_budget(c, "agsp");
  const auto res = run_pipeline(pipeline_config(c));
  CommandResult r;
  r.manifest = base_manifest(c, "agsp");
  r.manifest["pipeline"] = res.manifest;
  {
    Csv csv(out / "energy_cutoff.csv", {"tau", "kept_dim", "displacement", "gap_t", "gap_tilde", "width", "eps1", "eps2",
                                        "eps_omega", "eps_h", "status"});
    for (const auto& e : res.ecs)
      csv.row(e.tau, e.iso.kept_dim(), e.displacement, res.it->sd.gap, e.sd.gap, e.width, e.eps1, e.eps2,
              e.lemma.eps_omega, e.lemma.eps_h, status_name(e.report.status()));
  }
  {
    Csv csv(out / "agsp.csv", {"m", "eps_K", "eps_bound", "delta_K", "delta_chain", "fixes_ground", "sr_state",
                               "sr_operator", "log10_D_theory", "bootstrap_distance", "bootstrap_bound", "status"});
    for (const auto& a : res.agsp)
      csv.row(a.m, a.eps_K, a.eps_bound, a.delta_K, a.delta_chain, a.fixes_ground, a.schmidt_rank_state,
              a.schmidt_rank_operator, a.log10_D_theory, a.bootstrap_distance, a.bootstrap_bound,
              status_name(a.report.status()));
  }
  r.status = finish(r.manifest, res.reports());
  r.manifest["timings"]["total"] = since(t0);
  return r;
}

CommandResult cmd_entangle(const RunConfig& c, const fs::path& out) {
  const auto t0 = Clock::now();
  enforce_budget(c, "entangle");
  const auto spec = build_model(c.model);
  const auto space = build_space(c);
  const int L = space.n_sites();
  if (L < 2) throw std::invalid_argument("entangle needs at least two sites");
  const int cut = c.entangle.cut < 0 ? L / 2 : c.entangle.cut;
  if (cut <= 0 || cut >= L) throw std::invalid_argument("entangle.cut must lie in 1..L-1");
  const auto sd = solve(c, spec, space);
  CommandResult r;
  r.manifest = base_manifest(c, "entangle");
  r.manifest["spectral"] = spectral_json(sd);
  std::vector<CheckReport> reps;
  {
    Csv csv(out / "entropy.csv", {"cut", "entropy_nats", "entropy_bits", "rank"});
    for (int x = 1; x < L; ++x) {
      const auto s = schmidt_decompose(sd.ground, space, x, false, c.byte_budget);
      csv.row(x, entropy(s), entropy_bits(s), s.rank);
    }
  }
  {
    Csv csv(out / "mps.csv", {"D", "error", "error_sq", "sum_delta", "bound", "max_reduced_error", "status"});
    for (int D = 1; D <= c.entangle.D_max; ++D) {
      const auto m = mps_compress(sd.ground, space, D, c.byte_budget);
      double red = 0.0;
      for (double v : m.reduced_error) red = std::max(red, v);
      csv.row(D, m.error, m.error * m.error, m.delta_sum, m.bound, red, status_name(m.report.status()));
      reps.push_back(m.report);
    }
  }
  const std::size_t left = space.stride(cut);
  reps.push_back(eckart_young_check(sd.ground, left, space.dim() / left, c.entangle.rank, c.entangle.trials, c.seed));
  const auto mc = extract_constants(spec);
  const AreaLawParams p = spec.family == Family::Phi4Class ? area_law_params_phi4(spec.k, mc.alpha_bar)
                                                           : area_law_params_bh(spec.k, mc.alpha_bar);
  reps.push_back(area_law_report(sd, space, cut, p));
  if (spec.family == Family::BoseHubbardClass && !spec.long_range && !c.entangle.sweep_J.empty()) {
    int nmax = 0;
    for (int n : c.cutoffs) nmax = std::max(nmax, n);
    const auto rows = bh_entropy_sweep(L, nmax, c.model.U, c.entangle.sweep_J, cut, p);
    Csv csv(out / "area_law_sweep.csv", {"J", "gap", "entropy", "bound_C0"});
    for (const auto& row : rows) csv.row(row.parameter, row.gap, row.entropy, row.bound);
  }
  r.status = finish(r.manifest, reps);
  r.manifest["timings"]["total"] = since(t0);
  return r;
}

int run_command(const std::string& command, const RunConfig& c, const RunOptions& o) {
  RunLock lock(o.out);
  auto run_one = [&](const RunConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    CommandResult r;
    try {
      if (command == "solve")
        r = cmd_solve(cfg, dir);
      else if (command == "tail")
        r = cmd_tail(cfg, dir);
      else if (command == "suite")
        r = cmd_suite(cfg, dir, o.checks);
      else if (command == "agsp")
        r = cmd_agsp(cfg, dir);
      else if (command == "entangle")
        r = cmd_entangle(cfg, dir);
      else
        throw std::invalid_argument("unknown command '" + command + "'");
    } catch (...) {
      json err = base_manifest(cfg, command);
      try {
        throw;
      } catch (const std::exception& e) {
        err["error"] = e.what();
      }
      write_json(dir / "manifest.json", err);
      throw;
    }
    write_json(dir / "manifest.json", r.manifest);
    return r;
  };
  if (o.sweep.empty()) return exit_code(run_one(c, o.out).status);

  const auto [key, values] = parse_sweep(o.sweep);
  Csv csv(o.out / "sweep.csv", {"index", key, "status"});
  std::vector<CheckReport> summary;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json j = to_json(c);
    apply_override(j, key, values[i]);
    const auto cfg = config_from_json(j);
    const auto r = run_one(cfg, o.out / ("sweep_" + std::to_string(i)));
    csv.row(i, values[i], status_name(r.status));
    CheckReport s;
    s.name = "sweep_" + std::to_string(i);
    if (r.status == Status::BoundViolation) s.add("status", 1.0, 0.0);
    if (r.status == Status::HypothesisFailure) s.refuse("hypothesis failure");
    summary.push_back(s);
  }
  return exit_code(combine(summary));
}

int main(int argc, char** argv) {
  CLI::App app{"Interacting-boson workbench: ground states, bound checks, AGSP pipeline, entanglement"};
  app.require_subcommand(1);
  std::string config_path;
  RunOptions o;
  long long seed = -1;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "run directory");
    s->add_option("--threads", o.threads, "OpenMP threads (overrides BOSONWB_THREADS)");
    s->add_option("--seed", seed, "random seed (overrides the config)");
    s->add_option("--sweep", o.sweep, "key=lo:hi:n or key=v1,v2,... over config entries");
  };
  for (const char* name : {"solve", "tail", "agsp", "entangle"}) add_common(app.add_subcommand(name, ""));
  auto* suite = app.add_subcommand("suite", "run bound checks");
  add_common(suite);
  suite->add_option("--check", o.checks, "check names or 'all'")->delimiter(',');
  app.get_subcommand("solve")->description("ground state and gap");
  app.get_subcommand("tail")->description("boson-number tail and concentration fit");
  app.get_subcommand("agsp")->description("effective-Hamiltonian pipeline and Chebyshev AGSP certificates");
  app.get_subcommand("entangle")->description("entropies, MPS truncation and area-law report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  int threads = o.threads;
  if (threads <= 0)
    if (const char* env = std::getenv("BOSONWB_THREADS")) threads = std::atoi(env);
  if (threads > 0) kernels::set_threads(threads);

  try {
    RunConfig c = load_config(config_path);
    if (seed >= 0) {
      c.seed = static_cast<std::uint64_t>(seed);
      c.solver.seed = c.seed;
    }
    return run_command(command, c, o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace bw::cli
