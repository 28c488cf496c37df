#include "hstl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hstl/errors.hpp"
#include "hstl/rng.hpp"
#include "json.hpp"

namespace hstl {

namespace {

using Json = nlohmann::ordered_json;

void expect_keys(const Json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double as_number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ConfigError(where + " must be a number");
  return value.get<double>();
}

int as_int(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) throw ConfigError(where + " must be an integer");
  const auto v = value.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(where + " is out of range");
  return static_cast<int>(v);
}

std::string as_string(const Json& value, const std::string& where) {
  if (!value.is_string()) throw ConfigError(where + " must be a string");
  return value.get<std::string>();
}

std::vector<double> as_number_list(const Json& value, const std::string& where) {
  std::vector<double> out;
  if (value.is_number()) {
    out.push_back(value.get<double>());
    return out;
  }
  if (!value.is_array() || value.empty())
    throw ConfigError(where + " must be a number or a non-empty array of numbers");
  for (const auto& item : value) out.push_back(as_number(item, where + " entry"));
  return out;
}

void check_unit(double v, const std::string& where) {
  if (!(v >= 0.0) || v > 1.0) throw ConfigError(where + " must be in [0, 1]");
}

void check_rate(double v, const std::string& where) {
  if (!(v > 0.0) || v > 1.0) throw ConfigError(where + " must be in (0, 1]");
}

void parse_env(const Json& obj, EnvConfig& env) {
  expect_keys(obj, "env", {"width", "height", "intent_prob", "slip_prob"});
  if (obj.contains("width")) env.width = as_int(obj["width"], "env.width");
  if (obj.contains("height")) env.height = as_int(obj["height"], "env.height");
  if (obj.contains("intent_prob")) env.intent_prob = as_number(obj["intent_prob"], "env.intent_prob");
  if (obj.contains("slip_prob")) env.slip_prob = as_number(obj["slip_prob"], "env.slip_prob");
  if (env.width < 1 || env.height < 1) throw ConfigError("env dimensions must be positive");
  check_unit(env.intent_prob, "env.intent_prob");
  check_unit(env.slip_prob, "env.slip_prob");
  if (std::abs(env.intent_prob + 3.0 * env.slip_prob - 1.0) > 1e-9)
    throw ConfigError("env.intent_prob plus three times env.slip_prob must equal 1");
}

void parse_options(const Json& obj, OptionSetSpec& spec) {
  expect_keys(obj, "options", {"mode", "max_sequence_length", "explicit"});
  if (obj.contains("mode")) spec.mode = option_mode_from_name(as_string(obj["mode"], "options.mode"));
  if (obj.contains("max_sequence_length"))
    spec.max_sequence_length = as_int(obj["max_sequence_length"], "options.max_sequence_length");
  if (spec.max_sequence_length < 0)
    throw ConfigError("options.max_sequence_length must be non-negative");
  if (obj.contains("explicit")) {
    const Json& list = obj["explicit"];
    if (!list.is_array()) throw ConfigError("options.explicit must be an array of option ids");
    spec.explicit_ids.clear();
    for (const auto& item : list)
      spec.explicit_ids.push_back(as_string(item, "options.explicit entry"));
  }
  if (spec.mode == OptionSetMode::ExplicitList && spec.explicit_ids.empty())
    throw ConfigError("options mode 'explicit' needs a non-empty options.explicit list");
  if (spec.mode != OptionSetMode::ExplicitList && !spec.explicit_ids.empty())
    throw ConfigError("options.explicit is only valid with mode 'explicit'");
}

void parse_learning(const Json& obj, LearningConfig& lc) {
  expect_keys(obj, "learning",
              {"flat_gamma", "flat_alpha", "flat_epsilon0", "flat_epsilon_decay", "option_gamma",
               "option_alpha", "option_epsilon0", "option_epsilon_decay", "epsilon_floor",
               "q_init", "discount_exponent"});
  if (obj.contains("flat_gamma")) lc.flat_gamma = as_number_list(obj["flat_gamma"], "learning.flat_gamma");
  if (obj.contains("flat_alpha")) lc.flat_alpha = as_number_list(obj["flat_alpha"], "learning.flat_alpha");
  if (obj.contains("flat_epsilon0"))
    lc.flat_epsilon0 = as_number_list(obj["flat_epsilon0"], "learning.flat_epsilon0");
  if (obj.contains("flat_epsilon_decay"))
    lc.flat_epsilon_decay = as_number_list(obj["flat_epsilon_decay"], "learning.flat_epsilon_decay");
  if (obj.contains("option_gamma")) lc.option_gamma = as_number(obj["option_gamma"], "learning.option_gamma");
  if (obj.contains("option_alpha")) lc.option_alpha = as_number(obj["option_alpha"], "learning.option_alpha");
  if (obj.contains("option_epsilon0"))
    lc.option_epsilon0 = as_number(obj["option_epsilon0"], "learning.option_epsilon0");
  if (obj.contains("option_epsilon_decay"))
    lc.option_epsilon_decay = as_number(obj["option_epsilon_decay"], "learning.option_epsilon_decay");
  if (obj.contains("epsilon_floor")) lc.epsilon_floor = as_number(obj["epsilon_floor"], "learning.epsilon_floor");
  if (obj.contains("q_init")) lc.q_init = as_number(obj["q_init"], "learning.q_init");
  if (obj.contains("discount_exponent"))
    lc.discount_exponent = as_string(obj["discount_exponent"], "learning.discount_exponent");

  for (double g : lc.flat_gamma) check_unit(g, "learning.flat_gamma");
  for (double a : lc.flat_alpha) check_rate(a, "learning.flat_alpha");
  for (double e : lc.flat_epsilon0) check_unit(e, "learning.flat_epsilon0");
  for (double d : lc.flat_epsilon_decay)
    if (!(d >= 0.0)) throw ConfigError("learning.flat_epsilon_decay must be non-negative");
  check_unit(lc.option_gamma, "learning.option_gamma");
  check_rate(lc.option_alpha, "learning.option_alpha");
  check_unit(lc.option_epsilon0, "learning.option_epsilon0");
  if (!(lc.option_epsilon_decay >= 0.0))
    throw ConfigError("learning.option_epsilon_decay must be non-negative");
  check_unit(lc.epsilon_floor, "learning.epsilon_floor");
  for (double e : lc.flat_epsilon0)
    if (lc.epsilon_floor > e)
      throw ConfigError("learning.epsilon_floor must not exceed any flat_epsilon0");
  if (lc.epsilon_floor > lc.option_epsilon0)
    throw ConfigError("learning.epsilon_floor must not exceed option_epsilon0");
  if (!std::isfinite(lc.q_init)) throw ConfigError("learning.q_init must be finite");
  if (lc.discount_exponent != "remaining" && lc.discount_exponent != "total")
    throw ConfigError("learning.discount_exponent must be 'remaining' or 'total'");
}

}  // namespace

std::string option_mode_name(OptionSetMode mode) {
  switch (mode) {
    case OptionSetMode::SubsetsInOrder: return "subsets-in-order";
    case OptionSetMode::AllPermutations: return "all-permutations";
    case OptionSetMode::ExplicitList: return "explicit";
  }
  throw ConfigError("unreachable option mode");
}

OptionSetMode option_mode_from_name(const std::string& name) {
  if (name == "subsets-in-order") return OptionSetMode::SubsetsInOrder;
  if (name == "all-permutations") return OptionSetMode::AllPermutations;
  if (name == "explicit") return OptionSetMode::ExplicitList;
  throw ConfigError("unknown options.mode '" + name +
                    "'; expected subsets-in-order, all-permutations, or explicit");
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.formula = "G[0,inf) (F[0,40) psiA & F[0,40) psiB & F[0,40) psiC)";
  cfg.aliases = {
      {"psiA", "x > 3 & x < 9 & y > 10 & y < 14"},
      {"psiB", "x > 1 & x < 5 & y > 1 & y < 5"},
      {"psiC", "x > 9 & x < 13 & y > 1 & y < 7"},
  };
  cfg.options.mode = OptionSetMode::AllPermutations;
  return cfg;
}

RunConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  expect_keys(root, "config",
              {"formula", "aliases", "env", "options", "learning", "episodes",
               "option_choices_per_episode", "step_cap", "seed"});

  RunConfig cfg;
  cfg.aliases.clear();
  if (!root.contains("formula")) throw ConfigError("config needs a 'formula' string");
  cfg.formula = as_string(root["formula"], "formula");
  if (cfg.formula.empty()) throw ConfigError("formula must not be empty");

  if (root.contains("aliases")) {
    const Json& obj = root["aliases"];
    if (!obj.is_object()) throw ConfigError("aliases must be an object of name to text");
    for (const auto& item : obj.items())
      cfg.aliases.emplace_back(item.key(), as_string(item.value(), "alias '" + item.key() + "'"));
  }
  if (root.contains("env")) {
    if (!root["env"].is_object()) throw ConfigError("env must be an object");
    parse_env(root["env"], cfg.env);
  }
  if (root.contains("options")) {
    if (!root["options"].is_object()) throw ConfigError("options must be an object");
    parse_options(root["options"], cfg.options);
  }
  if (root.contains("learning")) {
    if (!root["learning"].is_object()) throw ConfigError("learning must be an object");
    parse_learning(root["learning"], cfg.learning);
  }
  if (root.contains("episodes")) cfg.episodes = as_int(root["episodes"], "episodes");
  if (root.contains("option_choices_per_episode"))
    cfg.option_choices_per_episode =
        as_int(root["option_choices_per_episode"], "option_choices_per_episode");
  if (root.contains("step_cap")) cfg.step_cap = as_int(root["step_cap"], "step_cap");
  if (root.contains("seed")) {
    const Json& s = root["seed"];
    if (!s.is_number_integer() && !s.is_number_unsigned())
      throw ConfigError("seed must be a non-negative integer");
    if (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)
      throw ConfigError("seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (cfg.episodes < 1) throw ConfigError("episodes must be at least 1");
  if (cfg.option_choices_per_episode < 1)
    throw ConfigError("option_choices_per_episode must be at least 1");
  if (cfg.step_cap < 1) throw ConfigError("step_cap must be at least 1");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_dump(const RunConfig& cfg) {
  Json root;
  root["formula"] = cfg.formula;
  Json aliases = Json::object();
  for (const auto& [name, text] : cfg.aliases) aliases[name] = text;
  root["aliases"] = aliases;
  root["env"] = {{"width", cfg.env.width},
                 {"height", cfg.env.height},
                 {"intent_prob", cfg.env.intent_prob},
                 {"slip_prob", cfg.env.slip_prob}};
  root["options"] = {{"mode", option_mode_name(cfg.options.mode)},
                     {"max_sequence_length", cfg.options.max_sequence_length},
                     {"explicit", cfg.options.explicit_ids}};
  root["learning"] = {{"flat_gamma", cfg.learning.flat_gamma},
                      {"flat_alpha", cfg.learning.flat_alpha},
                      {"flat_epsilon0", cfg.learning.flat_epsilon0},
                      {"flat_epsilon_decay", cfg.learning.flat_epsilon_decay},
                      {"option_gamma", cfg.learning.option_gamma},
                      {"option_alpha", cfg.learning.option_alpha},
                      {"option_epsilon0", cfg.learning.option_epsilon0},
                      {"option_epsilon_decay", cfg.learning.option_epsilon_decay},
                      {"epsilon_floor", cfg.learning.epsilon_floor},
                      {"q_init", cfg.learning.q_init},
                      {"discount_exponent", cfg.learning.discount_exponent}};
  root["episodes"] = cfg.episodes;
  root["option_choices_per_episode"] = cfg.option_choices_per_episode;
  root["step_cap"] = cfg.step_cap;
  root["seed"] = cfg.seed;
  return root.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
  const std::uint64_t h = fnv1a(canonical_dump(cfg));
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[i] = digits[(h >> (60 - 4 * i)) & 0xF];
  buf[16] = '\0';
  return std::string(buf);
}

std::vector<double> broadcast_per_predicate(const std::vector<double>& values, std::size_t n,
                                            const std::string& name) {
  if (values.size() == n) return values;
  if (values.size() == 1) return std::vector<double>(n, values[0]);
  throw ConfigError(name + " needs 1 or " + std::to_string(n) + " entries, got " +
                    std::to_string(values.size()));
}

}  // namespace hstl
