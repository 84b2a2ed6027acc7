#include "bosonwb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bw {

using nlohmann::json;

namespace {

const char* kind_name(OpKind k) {
  switch (k) {
    case OpKind::B: return "b";
    case OpKind::Bdag: return "bdag";
    case OpKind::N: return "n";
    case OpKind::Phi: return "phi";
    case OpKind::Pi: return "pi";
    case OpKind::NPow: return "npow";
  }
  return "?";
}

OpKind kind_from(const std::string& s) {
  if (s == "b") return OpKind::B;
  if (s == "bdag") return OpKind::Bdag;
  if (s == "n") return OpKind::N;
  if (s == "phi") return OpKind::Phi;
  if (s == "pi") return OpKind::Pi;
  if (s == "npow") return OpKind::NPow;
  throw std::invalid_argument("unknown operator kind '" + s + "'");
}

json term_json(const TermSpec& t) {
  json f = json::array();
  for (const auto& x : t.factors) f.push_back({x.site, kind_name(x.kind), x.power});
  return {{"c", {t.coefficient.real(), t.coefficient.imag()}},
          {"factors", f},
          {"hc", t.hermitian_conjugate_included},
          {"sector", t.sector == Sector::H0 ? "H0" : "Vplus"}};
}

TermSpec term_from(const json& j) {
  TermSpec t;
  const auto& c = j.at("c");
  t.coefficient = c.is_array() ? cplx(c.at(0).get<double>(), c.at(1).get<double>()) : cplx(c.get<double>(), 0.0);
  for (const auto& f : j.at("factors"))
    t.factors.push_back(Factor{f.at(0).get<int>(), kind_from(f.at(1).get<std::string>()), f.at(2).get<int>()});
  t.hermitian_conjugate_included = j.value("hc", false);
  const std::string sec = j.value("sector", "H0");
  if (sec != "H0" && sec != "Vplus") throw std::invalid_argument("unknown sector '" + sec + "'");
  t.sector = sec == "H0" ? Sector::H0 : Sector::Vplus;
  return t;
}

const char* transform_name(Transform t) { return t == Transform::ShiftInvert ? "shift_invert" : "none"; }

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const RunConfig& c) {
  json terms = json::array();
  for (const auto& t : c.model.terms) terms.push_back(term_json(t));
  const auto& m = c.model;
  const auto& s = c.solver;
  const auto& p = c.pipeline;
  const auto& e = c.entangle;
  return {
      {"model",
       {{"family", m.family},
        {"L", m.L},
        {"k", m.k},
        {"J", m.J},
        {"U", m.U},
        {"lambda", m.lambda},
        {"gamma", m.gamma},
        {"alpha", m.alpha},
        {"J0", m.J0},
        {"boundary", m.boundary},
        {"terms", terms},
        {"U_sites", m.U_sites},
        {"mu", m.mu}}},
      {"cutoffs", c.cutoffs},
      {"solver",
       {{"n_eigs", s.n_eigs},
        {"transform", transform_name(s.transform)},
        {"shift", s.shift},
        {"tol", s.tol},
        {"max_restarts", s.max_restarts},
        {"krylov_dim", s.krylov_dim},
        {"dense_threshold", s.dense_threshold},
        {"force_krylov", s.force_krylov}}},
      {"seed", c.seed},
      {"tail", {{"site", c.tail.site}, {"floor", c.tail.floor}}},
      {"pipeline",
       {{"ambient_cutoff", p.ambient_cutoff},
        {"eps0", p.eps0},
        {"a", p.a},
        {"b", p.b},
        {"n_min", p.n_min},
        {"q", p.q},
        {"l", p.l},
        {"taus", p.taus},
        {"agsp_tau", p.agsp_tau},
        {"degrees", p.degrees},
        {"validated_profile", p.validated_profile},
        {"add_gated_taus", p.add_gated_taus}}},
      {"entangle", {{"cut", e.cut}, {"D_max", e.D_max}, {"trials", e.trials}, {"rank", e.rank}, {"sweep_J", e.sweep_J}}},
      {"suite",
       {{"s_max", c.suite.s_max},
        {"tradeoff_instances", c.suite.tradeoff_instances},
        {"commutator_max", c.suite.commutator_max},
        {"lambda_max", c.suite.lambda_max}}},
      {"byte_budget", c.byte_budget}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (j.contains("model")) {
    const auto& m = j.at("model");
    auto& o = c.model;
    read(m, "family", o.family);
    read(m, "L", o.L);
    read(m, "k", o.k);
    read(m, "J", o.J);
    read(m, "U", o.U);
    read(m, "lambda", o.lambda);
    read(m, "gamma", o.gamma);
    read(m, "alpha", o.alpha);
    read(m, "J0", o.J0);
    read(m, "boundary", o.boundary);
    read(m, "U_sites", o.U_sites);
    read(m, "mu", o.mu);
    if (m.contains("terms"))
      for (const auto& t : m.at("terms")) o.terms.push_back(term_from(t));
  }
  if (j.contains("cutoff")) c.cutoffs.assign(c.model.L, j.at("cutoff").get<int>());
  read(j, "cutoffs", c.cutoffs);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    read(s, "n_eigs", c.solver.n_eigs);
    std::string t = transform_name(c.solver.transform);
    read(s, "transform", t);
    if (t != "none" && t != "shift_invert") throw std::invalid_argument("unknown transform '" + t + "'");
    c.solver.transform = t == "shift_invert" ? Transform::ShiftInvert : Transform::None;
    read(s, "shift", c.solver.shift);
    read(s, "tol", c.solver.tol);
    read(s, "max_restarts", c.solver.max_restarts);
    read(s, "krylov_dim", c.solver.krylov_dim);
    read(s, "dense_threshold", c.solver.dense_threshold);
    read(s, "force_krylov", c.solver.force_krylov);
  }
  read(j, "seed", c.seed);
  c.solver.seed = c.seed;
  if (j.contains("tail")) {
    read(j.at("tail"), "site", c.tail.site);
    read(j.at("tail"), "floor", c.tail.floor);
  }
  if (j.contains("pipeline")) {
    const auto& p = j.at("pipeline");
    auto& o = c.pipeline;
    read(p, "ambient_cutoff", o.ambient_cutoff);
    read(p, "eps0", o.eps0);
    read(p, "a", o.a);
    read(p, "b", o.b);
    read(p, "n_min", o.n_min);
    read(p, "q", o.q);
    read(p, "l", o.l);
    read(p, "taus", o.taus);
    read(p, "agsp_tau", o.agsp_tau);
    read(p, "degrees", o.degrees);
    read(p, "validated_profile", o.validated_profile);
    read(p, "add_gated_taus", o.add_gated_taus);
  }
  if (j.contains("entangle")) {
    const auto& e = j.at("entangle");
    read(e, "cut", c.entangle.cut);
    read(e, "D_max", c.entangle.D_max);
    read(e, "trials", c.entangle.trials);
    read(e, "rank", c.entangle.rank);
    read(e, "sweep_J", c.entangle.sweep_J);
  }
  if (j.contains("suite")) {
    const auto& s = j.at("suite");
    read(s, "s_max", c.suite.s_max);
    read(s, "tradeoff_instances", c.suite.tradeoff_instances);
    read(s, "commutator_max", c.suite.commutator_max);
    read(s, "lambda_max", c.suite.lambda_max);
  }
  read(j, "byte_budget", c.byte_budget);

  if (c.model.L < 1) throw std::invalid_argument("model.L must be >= 1");
  if (static_cast<int>(c.cutoffs.size()) != c.model.L)
    throw std::invalid_argument("cutoffs must list one value per site (got " + std::to_string(c.cutoffs.size()) +
                                " for L=" + std::to_string(c.model.L) + ")");
  for (int n : c.cutoffs)
    if (n < 1) throw std::invalid_argument("cutoffs must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

ModelSpec build_model(const ModelConfig& m) {
  const Boundary bc = m.boundary == "periodic" ? Boundary::Periodic : Boundary::Open;
  if (m.boundary != "open" && m.boundary != "periodic")
    throw std::invalid_argument("boundary must be 'open' or 'periodic'");
  ModelSpec s;
  if (m.family == "bose_hubbard") {
    s = standard_bose_hubbard(m.L, m.J, m.U, bc);
  } else if (m.family == "long_range_bose_hubbard") {
    s = long_range_bose_hubbard(m.L, m.alpha, m.J0, m.U);
  } else if (m.family == "phi4") {
    s = standard_phi4(m.L, m.lambda, m.gamma, bc);
  } else if (m.family == "explicit" || m.family == "explicit_bose_hubbard" || m.family == "explicit_phi4") {
    s.family = m.family == "explicit" ? Family::Explicit
                                      : (m.family == "explicit_phi4" ? Family::Phi4Class : Family::BoseHubbardClass);
    s.n_sites = m.L;
    s.k = m.k;
    s.terms = m.terms;
    s.U = m.U_sites;
    s.mu = m.mu;
    s.boundary = bc;
    s.name = m.family;
  } else {
    throw std::invalid_argument("unknown model family '" + m.family + "'");
  }
  s.validate();
  return s;
}

FockSpace build_space(const RunConfig& c) { return FockSpace(c.cutoffs); }

PipelineConfig pipeline_config(const RunConfig& c) {
  PipelineConfig p;
  p.spec = build_model(c.model);
  const auto& s = c.pipeline;
  p.ambient_cutoff = s.ambient_cutoff;
  p.schedule.eps0 = s.eps0;
  p.schedule.a = s.a;
  p.schedule.b = s.b;
  p.schedule.n_min = s.n_min;
  p.q = s.q;
  p.l = s.l;
  p.taus = s.taus;
  p.agsp_tau = static_cast<std::size_t>(std::max(0, s.agsp_tau));
  p.degrees = s.degrees;
  p.validated_profile = s.validated_profile;
  p.add_gated_taus = s.add_gated_taus;
  p.eig = c.solver;
  return p;
}

std::pair<std::string, std::vector<double>> parse_sweep(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("sweep must look like key=lo:hi:n or key=v1,v2");
  const std::string key = s.substr(0, eq), rhs = s.substr(eq + 1);
  std::vector<double> vals;
  if (std::count(rhs.begin(), rhs.end(), ':') == 2) {
    const auto c1 = rhs.find(':'), c2 = rhs.rfind(':');
    const double lo = std::stod(rhs.substr(0, c1)), hi = std::stod(rhs.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(rhs.substr(c2 + 1));
    if (n < 1) throw std::invalid_argument("sweep point count must be >= 1");
    for (int i = 0; i < n; ++i) vals.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
  } else {
    std::stringstream ss(rhs);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) vals.push_back(std::stod(tok));
  }
  if (vals.empty()) throw std::invalid_argument("sweep has no values");
  return {key, vals};
}

void apply_override(json& j, const std::string& dotted, double value) {
  json* node = &j;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  json& leaf = (*node)[parts.back()];
  if (leaf.is_number_integer() || leaf.is_number_unsigned())
    leaf = static_cast<long long>(std::llround(value));
  else
    leaf = value;
}

double estimate_bytes(const RunConfig& c, const std::string& command) {
  double dim = 1.0;
  for (int n : c.cutoffs) dim *= n + 1.0;
  double worst = 0.0;
  // Lanczos basis or the dense solve
  const double kry = std::max(48, 2 * c.solver.n_eigs + 30);
  worst = dim <= static_cast<double>(c.solver.dense_threshold) ? 16.0 * dim * dim * 2.0 : 16.0 * dim * (kry + 8.0);
  if (command == "entangle" || command == "suite") {
    double left = 1.0;
    for (std::size_t x = 0; x + 1 < c.cutoffs.size(); ++x) {
      left *= c.cutoffs[x] + 1.0;
      const double right = dim / left;
      worst = std::max(worst, 16.0 * (left * right + left * left + right * right));
    }
  }
  if (command == "agsp") {
    const double amb = std::pow(c.pipeline.ambient_cutoff + 1.0, c.model.L);
    worst = std::max(worst, 16.0 * amb * (kry + 8.0));
    // largest block of the reduced space, diagonalized densely
    const double block = std::pow(c.pipeline.ambient_cutoff + 1.0, std::max(c.pipeline.l, c.model.L - c.pipeline.q * c.pipeline.l));
    worst = std::max(worst, 16.0 * block * block * 2.0);
  }
  return worst;
}

void enforce_budget(const RunConfig& c, const std::string& command) {
  const double need = estimate_bytes(c, command);
  if (need > static_cast<double>(c.byte_budget)) {
    std::ostringstream os;
    os << "command '" << command << "' needs an estimated " << static_cast<long long>(need)
       << " bytes of dense storage, above the budget of " << c.byte_budget << " bytes (byte_budget in the config)";
    throw std::length_error(os.str());
  }
}

}  // namespace bw
