#include "hstl/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hstl/errors.hpp"
#include "json.hpp"

namespace hstl {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t nl = text.find('\n', begin);
    if (nl == std::string::npos) nl = text.size();
    out.push_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  return out;
}

int parse_int_field(const std::string& text, const char* what) {
  int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw IoError(std::string("bad ") + what + " field '" + text + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw IoError("bad numeric field '" + text + "'");
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string qtable_csv(const QTable& q, const GridWorld& env, const std::string& label,
                       const std::vector<std::string>& column_names) {
  if (column_names.size() != q.actions())
    throw IoError("column name count does not match the table width");
  std::string out = "x,y," + label + ",value\n";
  for (std::size_t s = 0; s < q.states(); ++s) {
    const State st = env.state_at(s);
    const std::string prefix = std::to_string(st[0]) + "," + std::to_string(st[1]) + ",";
    for (std::size_t a = 0; a < q.actions(); ++a)
      out += prefix + column_names[a] + "," + format_double(q.at(s, a)) + "\n";
  }
  return out;
}

QTable load_qtable_csv(const std::string& text, const GridWorld& env, const std::string& label,
                       const std::vector<std::string>& column_names) {
  const std::vector<std::string> lines = split_lines(text);
  const std::string header = "x,y," + label + ",value";
  if (lines.empty() || lines[0] != header)
    throw IoError("table file does not start with header '" + header + "'");
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t a = 0; a < column_names.size(); ++a) column[column_names[a]] = a;

  QTable q(env.state_count(), column_names.size(), 0.0);
  std::vector<char> seen(env.state_count() * column_names.size(), 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> fields = split_line(lines[i]);
    if (fields.size() != 4) throw IoError("table row needs 4 fields: '" + lines[i] + "'");
    const int x = parse_int_field(fields[0], "x");
    const int y = parse_int_field(fields[1], "y");
    const auto it = column.find(fields[2]);
    if (it == column.end()) throw IoError("unknown " + label + " '" + fields[2] + "'");
    const std::size_t s = env.state_index(State{x, y});
    const std::size_t cell = s * column_names.size() + it->second;
    if (seen[cell]) throw IoError("duplicate table row: '" + lines[i] + "'");
    seen[cell] = 1;
    q.at(s, it->second) = parse_double(fields[3]);
  }
  for (char flag : seen)
    if (!flag) throw IoError("table file is missing rows");
  return q;
}

std::string reward_curve_csv(const std::vector<EpisodeLog>& episodes,
                             const std::vector<std::string>& primitive_ids) {
  std::string out = "episode,cumulative_reward,eps_options";
  for (const std::string& id : primitive_ids) out += ",eps_flat_" + id;
  out += ",steps\n";
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    const EpisodeLog& log = episodes[e];
    if (log.eps_flat.size() != primitive_ids.size())
      throw IoError("episode log does not match the primitive count");
    out += std::to_string(e) + "," + format_double(log.cumulative_reward) + "," +
           format_double(log.eps_options);
    for (double eps : log.eps_flat) out += "," + format_double(eps);
    out += "," + std::to_string(log.steps) + "\n";
  }
  return out;
}

std::string option_counts_csv(const std::vector<std::string>& option_ids,
                              const std::vector<std::uint64_t>& counts) {
  if (option_ids.size() != counts.size())
    throw IoError("option id and count lists differ in length");
  std::string out = "option_id,choices\n";
  for (std::size_t i = 0; i < option_ids.size(); ++i)
    out += option_ids[i] + "," + std::to_string(counts[i]) + "\n";
  return out;
}

std::string trace_csv(const std::vector<RolloutStep>& steps,
                      const std::vector<std::string>& action_names) {
  std::string out = "t,x,y,option_id,action\n";
  for (const RolloutStep& step : steps) {
    if (step.action < 0 || static_cast<std::size_t>(step.action) >= action_names.size())
      throw IoError("trace step carries an out-of-range action");
    out += std::to_string(step.t) + "," + std::to_string(step.state[0]) + "," +
           std::to_string(step.state[1]) + "," + step.option_id + "," +
           action_names[static_cast<std::size_t>(step.action)] + "\n";
  }
  return out;
}

std::string greedy_policy_csv(const TrainResult& tr) {
  const std::vector<std::string>& actions = tr.env.action_set();
  std::string out = "x,y,option";
  for (const PrimitiveOption& p : tr.primitives) out += ",action_" + p.id;
  out += "\n";
  for (std::size_t s = 0; s < tr.env.state_count(); ++s) {
    const State st = tr.env.state_at(s);
    out += std::to_string(st[0]) + "," + std::to_string(st[1]) + "," +
           tr.options[tr.learning.option_q.greedy_action(s)].id;
    for (const QTable& q : tr.learning.flat_q) out += "," + actions[q.greedy_action(s)];
    out += "\n";
  }
  return out;
}

std::string options_json(const TrainResult& tr) {
  Json root;
  Json primitives = Json::array();
  for (const PrimitiveOption& p : tr.primitives) {
    Json entry;
    entry["id"] = p.id;
    entry["predicate"] = to_text(*p.predicate);
    entry["max_robustness"] = format_rational(p.max_robustness);
    Json cells = Json::array();
    for (std::size_t s : p.termination_states) {
      const State st = tr.env.state_at(s);
      cells.push_back(Json::array({st[0], st[1]}));
    }
    entry["termination"] = cells;
    primitives.push_back(entry);
  }
  root["primitives"] = primitives;
  Json options = Json::array();
  for (const Option& o : tr.options) {
    Json entry;
    entry["id"] = o.id;
    Json seq = Json::array();
    for (std::size_t j : o.sequence) seq.push_back(tr.primitives[j].id);
    entry["sequence"] = seq;
    options.push_back(entry);
  }
  root["options"] = options;
  return root.dump(2) + "\n";
}

std::string manifest_json(const TrainResult& tr) {
  Json root;
  root["version"] = kToolVersion;
  root["seed"] = tr.config.seed;
  root["config_hash"] = config_hash(tr.config);
  root["config"] = Json::parse(canonical_dump(tr.config));
  Json ids = Json::array();
  for (const Option& o : tr.options) ids.push_back(o.id);
  root["option_ids"] = ids;
  Json preds = Json::array();
  for (const FormulaPtr& p : tr.predicates) preds.push_back(to_text(*p));
  root["predicates"] = preds;
  return root.dump(2) + "\n";
}

std::vector<std::string> export_run(const TrainResult& tr, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };
  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string p = path(name);
    write_text_file(p, content);
    written.push_back(p);
  };

  emit("reward_curve.csv", reward_curve_csv(tr.episodes, tr.primitive_ids()));
  emit("option_counts.csv", option_counts_csv(tr.option_ids(), tr.option_counts));
  const std::vector<std::string>& actions = tr.env.action_set();
  for (std::size_t j = 0; j < tr.primitives.size(); ++j)
    emit("flat_q_" + tr.primitives[j].id + ".csv",
         qtable_csv(tr.learning.flat_q[j], tr.env, "action", actions));
  emit("option_q.csv", qtable_csv(tr.learning.option_q, tr.env, "option", tr.option_ids()));
  emit("greedy_policy.csv", greedy_policy_csv(tr));
  emit("options.json", options_json(tr));
  emit("run_manifest.json", manifest_json(tr));
  return written;
}

void load_run_tables(TrainResult& tr, const std::string& dir) {
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };
  const std::vector<std::string>& actions = tr.env.action_set();
  for (std::size_t j = 0; j < tr.primitives.size(); ++j)
    tr.learning.flat_q[j] = load_qtable_csv(read_text_file(path("flat_q_" + tr.primitives[j].id + ".csv")),
                                            tr.env, "action", actions);
  tr.learning.option_q =
      load_qtable_csv(read_text_file(path("option_q.csv")), tr.env, "option", tr.option_ids());
}

}  // namespace hstl
