// Check reports shared by the bound checkers and the pipeline.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace bw {

enum class Status { Pass, BoundViolation, HypothesisFailure, Skipped };

const char* status_name(Status s);

struct CheckRow {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  bool ok = true;

  double margin() const { return bound - measured; }
};

struct CheckReport {
  std::string name;
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  std::vector<CheckRow> rows;
  nlohmann::json extra = nlohmann::json::object();

  // Adds measured <= bound * (1 + rel) + abs.
  CheckRow& add(std::string label, double measured, double bound, double rel = 1e-8, double abs = 0.0);
  // Adds a row that is not asserted.
  CheckRow& info(std::string label, double measured, double bound);
  void refuse(std::string note);

  Status status() const;
  bool passed() const { return status() == Status::Pass; }
  std::size_t violations() const;
  nlohmann::json to_json() const;
};

// Worst status across reports, in order of severity BoundViolation > HypothesisFailure > Pass.
Status combine(const std::vector<CheckReport>& reports);

}  // namespace bw
