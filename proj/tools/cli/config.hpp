#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace freestate::cli {

enum class StateMode { kInterior, kOuter };

struct JobConfig {
  int n = 0;
  std::vector<double> c;
  std::optional<double> lambda;
  StateMode mode = StateMode::kInterior;
  int max_word_len = 5;
  int max_len_cap = 8;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240917;
  std::size_t mc_samples = 100'000;
  int mc_max_len = 2;
  int gram_max_k = 0;  // 0: largest k <= 5 with n^k <= 256
  int round_trip_samples = 50;
};

// Default tolerance for every named check. Unknown names in a config are a
// config error.
const std::map<std::string, double>& default_tolerances();

double tolerance(const JobConfig& cfg, const std::string& name);

// Reads the JSON config file; missing keys keep their defaults. Throws
// ParseError on malformed content.
JobConfig load_config_file(const std::string& path);
JobConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const JobConfig& cfg);

// Fills n from c, checks lengths and bounds, resolves lambda for the outer
// mode and checks the open-annulus condition for the interior mode. Throws
// DomainError or ParseError.
void validate(JobConfig& cfg);

int effective_gram_max_k(const JobConfig& cfg);

}  // namespace freestate::cli
