#pragma once

#include <string>
#include <vector>

#include "hstl/harness.hpp"

namespace hstl {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal rendering that parses back to the same double; all
// numeric file output goes through this so identical values give identical
// bytes.
std::string format_double(double v);
double parse_double(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Long-form table dump, one row per state and column:
//   x,y,<label>,value
std::string qtable_csv(const QTable& q, const GridWorld& env, const std::string& label,
                       const std::vector<std::string>& column_names);
QTable load_qtable_csv(const std::string& text, const GridWorld& env, const std::string& label,
                       const std::vector<std::string>& column_names);

// episode,cumulative_reward,eps_options,eps_flat_<id>...,steps
std::string reward_curve_csv(const std::vector<EpisodeLog>& episodes,
                             const std::vector<std::string>& primitive_ids);

// option_id,choices
std::string option_counts_csv(const std::vector<std::string>& option_ids,
                              const std::vector<std::uint64_t>& counts);

// t,x,y,option_id,action
std::string trace_csv(const std::vector<RolloutStep>& steps,
                      const std::vector<std::string>& action_names);

// x,y,option,action_<id>... : greedy option plus each flat policy's greedy
// action per state.
std::string greedy_policy_csv(const TrainResult& tr);

// Option set description: primitives with predicate text, peak robustness,
// and termination states; combined options with constituent sequences.
std::string options_json(const TrainResult& tr);

// Run identity: version, seed, canonical config with its hash, option ids,
// predicate texts. Deliberately carries no timestamps so reruns match byte
// for byte.
std::string manifest_json(const TrainResult& tr);

// Writes the full export set (reward curve, option counts, tables, greedy
// policy, options and manifest JSON) into the directory, creating it if
// needed. Returns the list of files written.
std::vector<std::string> export_run(const TrainResult& tr, const std::string& dir);

// Reloads flat_q_<id>.csv and option_q.csv from an export directory into the
// learning state (table shapes must match the setup).
void load_run_tables(TrainResult& tr, const std::string& dir);

}  // namespace hstl
