// Run configuration: JSON round-trip, model construction and the memory guard.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bosonwb/agsp.hpp"
#include "bosonwb/entanglement.hpp"
#include "bosonwb/models.hpp"
#include "bosonwb/spectra.hpp"
#include "json.hpp"

namespace bw {

struct ModelConfig {
  std::string family = "bose_hubbard";  // bose_hubbard, long_range_bose_hubbard, phi4, explicit
  int L = 2;
  int k = 4;
  double J = 1.0;
  double U = 1.0;
  double lambda = 1.0;
  double gamma = 0.0;
  double alpha = 4.0;
  double J0 = 1.0;
  std::string boundary = "open";
  // explicit family only
  std::vector<TermSpec> terms;
  std::vector<double> U_sites;
  std::vector<double> mu;
};

struct TailConfig {
  int site = 0;
  double floor = 1e-12;
};

struct PipelineSection {
  int ambient_cutoff = 4;
  double eps0 = 0.1;
  double a = 1.0;
  double b = 2.0;
  int n_min = 1;
  int q = 2;
  int l = 2;
  std::vector<double> taus{4.0};
  int agsp_tau = 0;
  std::vector<int> degrees{2, 4, 8, 16};
  bool validated_profile = true;
  bool add_gated_taus = true;
};

struct EntangleSection {
  int cut = -1;  // -1 picks L/2
  int D_max = 8;
  int trials = 50;
  int rank = 2;
  std::vector<double> sweep_J{0.05, 0.1, 0.2, 0.4, 0.8};
};

struct SuiteSection {
  int s_max = 8;
  int tradeoff_instances = 100;
  int commutator_max = 5;
  int lambda_max = 8;
};

struct RunConfig {
  ModelConfig model;
  std::vector<int> cutoffs{6, 6};
  EigenOptions solver;
  std::uint64_t seed = 7;
  TailConfig tail;
  PipelineSection pipeline;
  EntangleSection entangle;
  SuiteSection suite;
  std::size_t byte_budget = kDefaultByteBudget;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
bool operator==(const RunConfig& a, const RunConfig& b);

ModelSpec build_model(const ModelConfig& m);
FockSpace build_space(const RunConfig& c);
PipelineConfig pipeline_config(const RunConfig& c);

// "path.to.key=lo:hi:n" (n evenly spaced points) or "path.to.key=v1,v2,...".
std::pair<std::string, std::vector<double>> parse_sweep(const std::string& s);
void apply_override(nlohmann::json& j, const std::string& dotted, double value);

// Largest dense allocation a command needs, in bytes.
double estimate_bytes(const RunConfig& c, const std::string& command);
// Throws std::length_error with the estimate and the budget.
void enforce_budget(const RunConfig& c, const std::string& command);

}  // namespace bw
