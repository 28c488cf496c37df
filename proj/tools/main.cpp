#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hstl/errors.hpp"
#include "hstl/harness.hpp"
#include "hstl/io.hpp"
#include "hstl/parser.hpp"
#include "hstl/robustness.hpp"

namespace {

using namespace hstl;

RunConfig resolve_config(const std::string& config_path, bool have_seed, std::uint64_t seed) {
  RunConfig cfg = config_path.empty() ? default_config() : load_config_file(config_path);
  if (have_seed) cfg.seed = seed;
  return cfg;
}

double trailing_mean(const std::vector<EpisodeLog>& episodes, std::size_t window) {
  const std::size_t w = std::min(window, episodes.size());
  double sum = 0.0;
  for (std::size_t i = episodes.size() - w; i < episodes.size(); ++i)
    sum += episodes[i].cumulative_reward;
  return w == 0 ? 0.0 : sum / static_cast<double>(w);
}

Trajectory parse_trajectory(const std::string& text, std::size_t dims) {
  Trajectory traj;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t sep = text.find(';', begin);
    if (sep == std::string::npos) sep = text.size();
    const std::string sample = text.substr(begin, sep - begin);
    if (!sample.empty()) {
      State s;
      std::size_t p = 0;
      while (p <= sample.size()) {
        std::size_t comma = sample.find(',', p);
        if (comma == std::string::npos) comma = sample.size();
        s.push_back(std::stoi(sample.substr(p, comma - p)));
        p = comma + 1;
      }
      if (s.size() != dims)
        throw EvalError("trajectory sample '" + sample + "' does not have " +
                        std::to_string(dims) + " coordinates");
      traj.states.push_back(std::move(s));
    }
    begin = sep + 1;
  }
  if (traj.states.empty()) throw EvalError("trajectory text contains no samples");
  return traj;
}

Trajectory trajectory_from_trace(const std::string& path) {
  const std::string text = read_text_file(path);
  Trajectory traj;
  std::size_t begin = 0;
  bool header = true;
  while (begin < text.size()) {
    std::size_t nl = text.find('\n', begin);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(begin, nl - begin);
    begin = nl + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != "t,x,y,option_id,action")
        throw IoError("trace file does not start with header 't,x,y,option_id,action'");
      header = false;
      continue;
    }
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 + 1);
    std::size_t c3 = line.find(',', c2 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos)
      throw IoError("malformed trace row: '" + line + "'");
    const int x = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    const int y = std::stoi(line.substr(c2 + 1, c3 - c2 - 1));
    traj.states.push_back(State{x, y});
  }
  if (traj.states.empty()) throw IoError("trace file contains no steps");
  return traj;
}

void print_window_stats(const WindowEvaluation& eval) {
  double lo = eval.values.front();
  double hi = eval.values.front();
  for (double v : eval.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::printf("window=%d starts=%zu positive_fraction=%s min=%s max=%s\n", eval.window,
              eval.values.size(), format_double(eval.positive_fraction).c_str(),
              format_double(lo).c_str(), format_double(hi).c_str());
}

int run_train(const std::string& config_path, bool have_seed, std::uint64_t seed,
              const std::string& out_dir) {
  const RunConfig cfg = resolve_config(config_path, have_seed, seed);
  const TrainResult tr = train(cfg);
  std::printf("predicates=%zu options=%zu episodes=%zu primitive_steps=%llu\n",
              tr.predicates.size(), tr.options.size(), tr.episodes.size(),
              static_cast<unsigned long long>(tr.learning.primitive_steps));
  std::printf("trailing_mean_200=%s\n", format_double(trailing_mean(tr.episodes, 200)).c_str());
  for (const std::string& path : export_run(tr, out_dir))
    std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_rollout(const std::string& config_path, bool have_seed, std::uint64_t seed,
                const std::string& from_dir, std::size_t steps, double eps,
                bool deterministic_env, const std::string& trace_path) {
  const RunConfig cfg = resolve_config(config_path, have_seed, seed);
  TrainResult tr = setup(cfg);
  load_run_tables(tr, from_dir);
  const RolloutResult rr = rollout(tr, cfg.seed, steps, eps, deterministic_env);
  const State& last = rr.traj.states.back();
  std::printf("steps=%zu final=%d,%d\n", rr.steps.size(), last[0], last[1]);
  if (!trace_path.empty()) {
    write_text_file(trace_path, trace_csv(rr.steps, tr.env.action_set()));
    std::printf("wrote %s\n", trace_path.c_str());
  }
  print_window_stats(evaluate_windows(rr.traj, tr.formula));
  return 0;
}

int run_eval(const std::string& config_path, const std::string& trace_path) {
  const RunConfig cfg = resolve_config(config_path, false, 0);
  const GridWorld env(cfg.env.width, cfg.env.height, cfg.env.intent_prob, cfg.env.slip_prob);
  const std::map<std::string, std::string> aliases(cfg.aliases.begin(), cfg.aliases.end());
  const FormulaPtr formula =
      parse_stl(expand_aliases(cfg.formula, aliases), env.state_variables());
  const Trajectory traj = trajectory_from_trace(trace_path);
  print_window_stats(evaluate_windows(traj, formula));
  return 0;
}

int run_compare(const std::string& config_path, bool have_seed, std::uint64_t seed,
                const std::string& mode_a, const std::string& mode_b, int trailing) {
  const RunConfig cfg = resolve_config(config_path, have_seed, seed);
  const CompareResult res = compare_option_sets(cfg, option_mode_from_name(mode_a),
                                                option_mode_from_name(mode_b), trailing);
  std::printf("%s trailing_mean=%s\n", res.label_a.c_str(),
              format_double(res.trailing_mean_a).c_str());
  std::printf("%s trailing_mean=%s\n", res.label_b.c_str(),
              format_double(res.trailing_mean_b).c_str());
  std::printf("relative_gain=%s\n", format_double(res.relative_gain).c_str());
  return 0;
}

int run_robustness(const std::string& formula_text, const std::vector<std::string>& alias_defs,
                   const std::string& vars_text, const std::string& traj_text, int at,
                   int truncate) {
  std::vector<std::string> vars;
  std::size_t begin = 0;
  while (begin <= vars_text.size()) {
    std::size_t comma = vars_text.find(',', begin);
    if (comma == std::string::npos) comma = vars_text.size();
    if (comma > begin) vars.push_back(vars_text.substr(begin, comma - begin));
    begin = comma + 1;
  }
  std::map<std::string, std::string> aliases;
  for (const std::string& def : alias_defs) {
    const std::size_t eq = def.find('=');
    if (eq == std::string::npos)
      throw ConfigError("alias '" + def + "' is not of the form name=text");
    aliases[def.substr(0, eq)] = def.substr(eq + 1);
  }
  FormulaPtr formula = parse_stl(expand_aliases(formula_text, aliases), vars);
  if (truncate > 0) formula = truncate_horizon(formula, truncate);
  const Trajectory traj = parse_trajectory(traj_text, vars.size());
  const std::optional<int> h = horizon(*formula);
  std::printf("formula=%s\n", to_text(*formula).c_str());
  std::printf("horizon=%s\n", h ? std::to_string(*h).c_str() : "unbounded");
  const Rational value = robustness(traj, *formula, at);
  std::printf("robustness=%s (%s)\n", format_rational(value).c_str(),
              format_double(to_double(value)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL-guided option learning on grid worlds"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool have_seed = false;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration (built-in default when omitted)");
    sub->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
      have_seed = true;
    });
  };

  CLI::App* cmd_train = app.add_subcommand("train", "Learn policies for the configured task");
  add_common(cmd_train);
  std::string out_dir = "out";
  cmd_train->add_option("--out", out_dir, "Directory for run artifacts");

  CLI::App* cmd_rollout =
      app.add_subcommand("rollout", "Replay learned tables from an export directory");
  add_common(cmd_rollout);
  std::string from_dir;
  std::size_t steps = 500;
  double eps = 0.0;
  bool det_env = false;
  std::string trace_path;
  cmd_rollout->add_option("--from", from_dir, "Export directory to load tables from")->required();
  cmd_rollout->add_option("--steps", steps, "Primitive steps to replay");
  cmd_rollout->add_option("--eps", eps, "Exploration rate during replay");
  cmd_rollout->add_flag("--deterministic-env", det_env, "Replay on a slip-free copy of the grid");
  cmd_rollout->add_option("--trace", trace_path, "Write the step trace to this CSV file");

  CLI::App* cmd_eval = app.add_subcommand("eval", "Evaluate a recorded trace against the task");
  add_common(cmd_eval);
  std::string eval_trace;
  cmd_eval->add_option("--trace", eval_trace, "Trace CSV produced by rollout")->required();

  CLI::App* cmd_compare = app.add_subcommand("compare", "Train two option-set modes side by side");
  add_common(cmd_compare);
  std::string mode_a = "subsets-in-order";
  std::string mode_b = "all-permutations";
  int trailing = 200;
  cmd_compare->add_option("--mode-a", mode_a, "First option-set mode");
  cmd_compare->add_option("--mode-b", mode_b, "Second option-set mode");
  cmd_compare->add_option("--trailing", trailing, "Episodes in the trailing mean");

  CLI::App* cmd_config = app.add_subcommand("config", "Print the canonical default configuration");
  std::string config_out;
  cmd_config->add_option("--out", config_out, "Write the JSON here instead of stdout");

  CLI::App* cmd_rob = app.add_subcommand("robustness", "Evaluate a formula on a trajectory");
  std::string formula_text;
  std::string vars_text = "x,y";
  std::string traj_text;
  std::vector<std::string> alias_defs;
  int at = 0;
  int truncate = 0;
  cmd_rob->add_option("--formula", formula_text, "Formula text")->required();
  cmd_rob->add_option("--alias", alias_defs, "name=text shorthand, repeatable");
  cmd_rob->add_option("--vars", vars_text, "Comma-separated variable names");
  cmd_rob->add_option("--traj", traj_text, "Samples like '9,7;10,7;11,7'")->required();
  cmd_rob->add_option("--at", at, "Evaluation time within the trajectory");
  cmd_rob->add_option("--truncate", truncate, "Fit the formula to this many samples first");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_train->parsed()) return run_train(config_path, have_seed, seed, out_dir);
    if (cmd_rollout->parsed())
      return run_rollout(config_path, have_seed, seed, from_dir, steps, eps, det_env, trace_path);
    if (cmd_eval->parsed()) return run_eval(config_path, eval_trace);
    if (cmd_compare->parsed())
      return run_compare(config_path, have_seed, seed, mode_a, mode_b, trailing);
    if (cmd_config->parsed()) {
      const std::string dump = canonical_dump(default_config()) + "\n";
      if (config_out.empty()) {
        std::fputs(dump.c_str(), stdout);
      } else {
        write_text_file(config_out, dump);
        std::printf("wrote %s\n", config_out.c_str());
      }
      return 0;
    }
    if (cmd_rob->parsed())
      return run_robustness(formula_text, alias_defs, vars_text, traj_text, at, truncate);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "formula error: %s\n", e.what());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 1;
  } catch (const OptionError& e) {
    std::fprintf(stderr, "option error: %s\n", e.what());
    return 1;
  } catch (const EvalError& e) {
    std::fprintf(stderr, "evaluation error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
