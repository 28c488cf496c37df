#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hstl/options.hpp"

namespace hstl {

struct EnvConfig {
  int width = 15;
  int height = 15;
  double intent_prob = 0.7;
  double slip_prob = 0.1;
};

struct LearningConfig {
  // Per-predicate lists; a single entry broadcasts to every predicate once
  // the formula is parsed.
  std::vector<double> flat_gamma{0.9};
  std::vector<double> flat_alpha{0.2};
  std::vector<double> flat_epsilon0{0.8};
  std::vector<double> flat_epsilon_decay{1e-6};
  double option_gamma = 0.9;
  double option_alpha = 0.5;
  double option_epsilon0 = 0.8;
  double option_epsilon_decay = 1e-4;
  double epsilon_floor = 0.1;
  double q_init = 0.0;
  std::string discount_exponent = "remaining";  // or "total"
};

struct RunConfig {
  std::string formula;
  // Expanded in declaration order before parsing; definitions may reference
  // other aliases.
  std::vector<std::pair<std::string, std::string>> aliases;
  EnvConfig env;
  OptionSetSpec options;
  LearningConfig learning;
  int episodes = 1200;
  int option_choices_per_episode = 200;
  int step_cap = 500;
  std::uint64_t seed = 1;
};

// The surveillance experiment on the 15x15 grid: visit three regions over
// and over, each within every 40-step window.
RunConfig default_config();

// Parses and validates a JSON config. Unknown keys anywhere are an error, as
// are out-of-range values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// Stable JSON rendering with fixed key order; parse_config(canonical_dump(c))
// reproduces c exactly.
std::string canonical_dump(const RunConfig& cfg);

// FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

std::string option_mode_name(OptionSetMode mode);
OptionSetMode option_mode_from_name(const std::string& name);

// Expands a one-entry list to n entries; errors when the length is neither 1
// nor n.
std::vector<double> broadcast_per_predicate(const std::vector<double>& values, std::size_t n,
                                            const std::string& name);

}  // namespace hstl
