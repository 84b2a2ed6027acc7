#include "bosonwb/report.hpp"

#include <cmath>

namespace bw {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::BoundViolation: return "bound_violation";
    case Status::HypothesisFailure: return "hypothesis_failure";
    case Status::Skipped: return "skipped";
  }
  return "unknown";
}

CheckRow& CheckReport::add(std::string label, double measured, double bound, double rel, double abs) {
  CheckRow r;
  r.label = std::move(label);
  r.measured = measured;
  r.bound = bound;
  r.tol = std::abs(bound) * rel + abs;
  r.ok = std::isfinite(measured) && measured <= bound + r.tol;
  if (std::isinf(bound) && bound > 0) r.ok = !std::isnan(measured);
  rows.push_back(r);
  return rows.back();
}

CheckRow& CheckReport::info(std::string label, double measured, double bound) {
  CheckRow r;
  r.label = std::move(label);
  r.measured = measured;
  r.bound = bound;
  r.ok = true;
  r.tol = -1.0;
  rows.push_back(r);
  return rows.back();
}

void CheckReport::refuse(std::string note) {
  hypothesis_ok = false;
  if (!hypothesis_note.empty()) hypothesis_note += "; ";
  hypothesis_note += note;
}

std::size_t CheckReport::violations() const {
  std::size_t n = 0;
  for (const auto& r : rows)
    if (!r.ok) ++n;
  return n;
}

Status CheckReport::status() const {
  if (violations() > 0) return Status::BoundViolation;
  if (!hypothesis_ok) return Status::HypothesisFailure;
  return Status::Pass;
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = name;
  j["status"] = status_name(status());
  j["hypothesis_ok"] = hypothesis_ok;
  if (!hypothesis_note.empty()) j["hypothesis_note"] = hypothesis_note;
  auto& arr = j["rows"] = nlohmann::json::array();
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  for (const auto& r : rows) {
    nlohmann::json row;
    row["label"] = r.label;
    row["measured"] = num(r.measured);
    row["bound"] = num(r.bound);
    row["margin"] = num(r.margin());
    if (r.tol >= 0) {
      row["tolerance"] = num(r.tol);
      row["ok"] = r.ok;
    } else {
      row["asserted"] = false;
    }
    arr.push_back(row);
  }
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

Status combine(const std::vector<CheckReport>& reports) {
  Status s = Status::Pass;
  for (const auto& r : reports) {
    const Status t = r.status();
    if (t == Status::BoundViolation) return t;
    if (t == Status::HypothesisFailure) s = t;
  }
  return s;
}

}  // namespace bw
