#include "config.hpp"

#include <cmath>
#include <fstream>

#include "freestate/eigenstate.hpp"
#include "freestate/errors.hpp"

namespace freestate::cli {

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"algebraic_properties", 1e-12},
      {"arrow_determinant", 1e-10},
      {"b_minus_x1", 1e-12},
      {"canonical_consistency", 1e-12},
      {"canonical_invariants", 1e-10},
      {"compatibility", 1e-12},
      {"constancy", 0.0},
      {"depth_stability", 1e-12},
      {"det_jacobian", 1e-10},
      {"eigen_relation", 1e-12},
      {"geometric_inverse", 1e-12},
      {"gram_recursion", 1e-12},
      {"h_identity", 1e-10},
      {"integration", 1e-10},
      {"isometry", 1e-12},
      {"jacobian_fd", 1e-5},
      {"measure_invariants", 1e-12},
      {"monte_carlo_sigmas", 4.0},
      {"power_norm", 1e-12},
      {"psd", 1e-9},
      {"radon_nikodym", 1e-12},
      {"rightsum", 1e-12},
      {"s_residual", 1e-10},
      {"s_round_trip", 1e-8},
      {"spectrum", 0.0},
      {"symmetry_ratio", 1e-12},
      {"w_intertwiner", 1e-12},
  };
  return defaults;
}

double tolerance(const JobConfig& cfg, const std::string& name) {
  if (auto it = cfg.tolerances.find(name); it != cfg.tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

JobConfig config_from_json(const nlohmann::json& j) {
  JobConfig cfg;
  try {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "n") {
        cfg.n = value.get<int>();
      } else if (key == "c") {
        cfg.c = value.get<std::vector<double>>();
      } else if (key == "lambda") {
        if (!value.is_null()) cfg.lambda = value.get<double>();
      } else if (key == "mode") {
        const auto mode = value.get<std::string>();
        if (mode == "interior") {
          cfg.mode = StateMode::kInterior;
        } else if (mode == "outer") {
          cfg.mode = StateMode::kOuter;
        } else {
          throw ParseError("mode must be \"interior\" or \"outer\"");
        }
      } else if (key == "max_len") {
        cfg.max_word_len = value.get<int>();
      } else if (key == "max_len_cap") {
        cfg.max_len_cap = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "mc_samples") {
        cfg.mc_samples = value.get<std::size_t>();
      } else if (key == "mc_max_len") {
        cfg.mc_max_len = value.get<int>();
      } else if (key == "gram_max_k") {
        cfg.gram_max_k = value.get<int>();
      } else if (key == "round_trip_samples") {
        cfg.round_trip_samples = value.get<int>();
      } else if (key == "tolerances") {
        for (const auto& [name, tol] : value.items()) cfg.tolerances[name] = tol.get<double>();
      } else {
        throw ParseError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

JobConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const JobConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["c"] = cfg.c;
  j["lambda"] = cfg.lambda ? nlohmann::json(*cfg.lambda) : nlohmann::json(nullptr);
  j["mode"] = cfg.mode == StateMode::kInterior ? "interior" : "outer";
  j["max_len"] = cfg.max_word_len;
  j["max_len_cap"] = cfg.max_len_cap;
  j["seed"] = cfg.seed;
  j["mc_samples"] = cfg.mc_samples;
  j["mc_max_len"] = cfg.mc_max_len;
  j["gram_max_k"] = effective_gram_max_k(cfg);
  j["round_trip_samples"] = cfg.round_trip_samples;
  nlohmann::json tols = nlohmann::json::object();
  for (const auto& [name, def] : default_tolerances()) tols[name] = tolerance(cfg, name);
  j["tolerances"] = tols;
  return j;
}

void validate(JobConfig& cfg) {
  for (const auto& [name, tol] : cfg.tolerances) {
    if (!default_tolerances().contains(name)) throw ParseError("unknown tolerance '" + name + "'");
    if (!(tol >= 0.0)) throw ParseError("tolerance '" + name + "' must be >= 0");
  }
  if (cfg.c.empty()) throw ParseError("no coefficients given (use --c)");
  if (cfg.n == 0) cfg.n = static_cast<int>(cfg.c.size());
  if (cfg.n != static_cast<int>(cfg.c.size())) {
    throw ParseError("--n " + std::to_string(cfg.n) + " does not match " +
                     std::to_string(cfg.c.size()) + " coefficients");
  }
  if (cfg.max_word_len < 0) throw ParseError("max_len must be >= 0");
  if (cfg.max_word_len > cfg.max_len_cap) {
    throw ParseError("max_len " + std::to_string(cfg.max_word_len) + " exceeds the safety cap " +
                     std::to_string(cfg.max_len_cap) + " (raise max_len_cap to allow it)");
  }
  if (cfg.mc_samples < 2) throw ParseError("mc_samples must be >= 2");

  double norm_sq = 0.0;
  for (double v : cfg.c) norm_sq += v * v;
  if (cfg.mode == StateMode::kOuter) {
    for (double v : cfg.c) {
      if (!(v >= 0.0)) throw DomainError("outer-boundary coefficients must be nonnegative");
    }
    if (!(norm_sq > 0.0)) throw DomainError("outer-boundary state needs a nonzero c");
    const double norm = std::sqrt(norm_sq);
    if (cfg.lambda && std::abs(*cfg.lambda - norm) > 1e-12 * norm) {
      throw DomainError("outer mode requires lambda = ||c|| = " + std::to_string(norm));
    }
    cfg.lambda = norm;
    return;
  }
  if (!cfg.lambda) throw ParseError("interior mode needs --lambda");
  const CoefficientVector cv(cfg.c, *cfg.lambda);
  if (!interior_check(cv)) {
    throw DomainError("lambda is not strictly inside the reduced spectrum annulus "
                      "(use --outer for lambda = ||c||)");
  }
}

int effective_gram_max_k(const JobConfig& cfg) {
  if (cfg.gram_max_k > 0) return cfg.gram_max_k;
  int k = 1;
  std::size_t size = static_cast<std::size_t>(std::max(cfg.n, 1));
  while (k < 5 && size * static_cast<std::size_t>(cfg.n) <= 256) {
    size *= static_cast<std::size_t>(cfg.n);
    ++k;
  }
  return k;
}

}  // namespace freestate::cli
