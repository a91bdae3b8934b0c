#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace freestate::cli {

bool VerificationReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> VerificationReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.name + " [" + c.anchor + "]");
  }
  return out;
}

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

// Rounds through the 15-digit text so the JSON number prints the same digits.
nlohmann::json number15(double v) {
  if (!std::isfinite(v)) return fmt15(v);
  return std::stod(fmt15(v));
}

}  // namespace

nlohmann::json report_body(const VerificationReport& r) {
  nlohmann::json body;
  body["tool"] = "freestate";
  body["version"] = r.version;
  body["toolchain"] = r.toolchain;
  body["config"] = r.config;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"max_residual", number15(c.max_residual)},
                      {"tolerance", number15(c.tolerance)},
                      {"pass", c.pass}});
  }
  body["checks"] = checks;
  body["overall"] = r.pass() ? "pass" : "fail";
  return body;
}

std::string render_report(const VerificationReport& r, const std::string& timestamp) {
  auto j = report_body(r);
  j["generated_at"] = timestamp;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace freestate::cli
