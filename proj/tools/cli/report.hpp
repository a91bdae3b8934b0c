#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace freestate::cli {

struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity being checked, as a formula
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckRecord> checks;  // sorted by name
  nlohmann::json config;
  std::string version;
  std::string toolchain;

  bool pass() const;
  std::vector<std::string> failing() const;
};

// 15 significant digits, as used by every printed number.
std::string fmt15(double v);

// Report without the timestamp; identical inputs give identical bytes.
nlohmann::json report_body(const VerificationReport& r);
// Body plus a "generated_at" field.
std::string render_report(const VerificationReport& r, const std::string& timestamp);
std::string utc_timestamp();

}  // namespace freestate::cli
