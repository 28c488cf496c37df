#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "hstl/config.hpp"
#include "hstl/errors.hpp"
#include "hstl/harness.hpp"
#include "hstl/io.hpp"
#include "hstl/parser.hpp"
#include "json.hpp"

using namespace hstl;

namespace {

RunConfig small_config() {
  RunConfig cfg = default_config();
  cfg.episodes = 3;
  cfg.option_choices_per_episode = 8;
  cfg.step_cap = 60;
  cfg.seed = 7;
  return cfg;
}

std::filesystem::path fresh_dir(const char* tag) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / tag;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("the default config round-trips through its canonical dump") {
  const RunConfig cfg = default_config();
  const std::string dump = canonical_dump(cfg);
  const RunConfig back = parse_config(dump);
  CHECK(canonical_dump(back) == dump);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);

  RunConfig other = cfg;
  other.seed = 2;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": ""})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "env": {"width": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "env": {"wdith": 15}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"formula": "x > 1", "env": {"intent_prob": 0.7, "slip_prob": 0.2}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "learning": {"flat_alpha": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"formula": "x > 1", "learning": {"epsilon_floor": 0.9}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"formula": "x > 1", "learning": {"discount_exponent": "weird"}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "options": {"mode": "nope"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "options": {"mode": "explicit"}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"formula": "x > 1", "options": {"mode": "subsets-in-order", "explicit": ["A"]}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "episodes": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "step_cap": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"formula": "x > 1", "seed": -1})"), ConfigError);

  // single-entry lists broadcast per predicate, anything else must match
  CHECK(broadcast_per_predicate({0.5}, 3, "x") == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(broadcast_per_predicate({1, 2, 3}, 3, "x") == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(broadcast_per_predicate({1, 2}, 3, "x"), ConfigError);
}

TEST_CASE("option mode names round-trip") {
  for (OptionSetMode m : {OptionSetMode::SubsetsInOrder, OptionSetMode::AllPermutations,
                          OptionSetMode::ExplicitList})
    CHECK(option_mode_from_name(option_mode_name(m)) == m);
  CHECK_THROWS_AS(option_mode_from_name("nope"), ConfigError);
}

TEST_CASE("setup resolves the default task into fifteen options over three predicates") {
  const TrainResult tr = setup(default_config());
  CHECK(tr.predicates.size() == 3);
  CHECK(tr.primitives.size() == 3);
  CHECK(tr.options.size() == 15);
  CHECK(tr.learning.flat_q.size() == 3);
  CHECK(tr.learning.option_q.states() == 225);
  CHECK(tr.learning.option_q.actions() == 15);
  CHECK(tr.option_counts == std::vector<std::uint64_t>(15, 0));
  CHECK(tr.episodes.empty());
  CHECK(tr.primitive_ids() == std::vector<std::string>{"A", "B", "C"});

  RunConfig subsets = default_config();
  subsets.options.mode = OptionSetMode::SubsetsInOrder;
  CHECK(setup(subsets).options.size() == 7);
}

TEST_CASE("setup rejects formulas that do not fit the environment") {
  RunConfig cfg = default_config();
  cfg.formula = "z > 1";
  CHECK_THROWS_AS(setup(cfg), ParseError);

  cfg = default_config();
  cfg.formula = "psiA & psiUndefined";
  CHECK_THROWS_AS(setup(cfg), ParseError);

  cfg = default_config();
  cfg.learning.flat_alpha = {0.2, 0.3};  // two entries, three predicates
  CHECK_THROWS_AS(setup(cfg), ConfigError);
}

TEST_CASE("training is reproducible bit for bit") {
  const RunConfig cfg = small_config();
  const TrainResult a = train(cfg);
  const TrainResult b = train(cfg);

  CHECK(reward_curve_csv(a.episodes, a.primitive_ids()) ==
        reward_curve_csv(b.episodes, b.primitive_ids()));
  CHECK(a.option_counts == b.option_counts);
  CHECK(a.learning.option_q.raw() == b.learning.option_q.raw());
  for (std::size_t j = 0; j < a.learning.flat_q.size(); ++j)
    CHECK(a.learning.flat_q[j].raw() == b.learning.flat_q[j].raw());

  RunConfig reseeded = cfg;
  reseeded.seed = 8;
  const TrainResult c = train(reseeded);
  CHECK(a.learning.option_q.raw() != c.learning.option_q.raw());
}

TEST_CASE("training logs account for every choice and step") {
  const RunConfig cfg = small_config();
  const TrainResult tr = train(cfg);

  REQUIRE(tr.episodes.size() == 3);
  std::uint64_t choices = 0;
  for (std::uint64_t c : tr.option_counts) choices += c;
  CHECK(choices == 24);
  CHECK(tr.learning.option_choices == 24);

  std::uint64_t steps = 0;
  for (const EpisodeLog& ep : tr.episodes) {
    steps += ep.steps;
    CHECK(ep.eps_flat.size() == 3);
  }
  CHECK(steps == tr.learning.primitive_steps);
  CHECK(tr.learning.primitive_steps > 0);

  // schedules only decay
  for (std::size_t e = 1; e < tr.episodes.size(); ++e) {
    CHECK(tr.episodes[e].eps_options <= tr.episodes[e - 1].eps_options);
    CHECK(tr.episodes[e].eps_flat[0] <= tr.episodes[e - 1].eps_flat[0]);
  }
}

TEST_CASE("window evaluation slides the task body over a trajectory") {
  const std::vector<std::string> vars{"x", "y"};
  const FormulaPtr phi = parse_stl("G[0,inf) F[0,3) x > 2", vars);
  Trajectory traj;
  for (int x : {0, 3, 0, 0, 0, 3}) traj.states.push_back(State{x, 0});

  const WindowEvaluation ev = evaluate_windows(traj, phi);
  CHECK(ev.window == 3);
  CHECK(ev.values == std::vector<double>{1, 1, -2, 1});
  CHECK(ev.positive_fraction == doctest::Approx(0.75));

  // without an outer always the whole formula is the body
  const WindowEvaluation bare = evaluate_windows(traj, parse_stl("F[0,3) x > 2", vars));
  CHECK(bare.values == ev.values);

  CHECK_THROWS_AS(evaluate_windows(traj, parse_stl("G[0,inf) F[0,inf) x > 2", vars)), EvalError);
  Trajectory tiny;
  tiny.states = {State{0, 0}};
  CHECK_THROWS_AS(evaluate_windows(tiny, phi), EvalError);
}

TEST_CASE("comparing a mode against itself is exactly neutral") {
  const CompareResult r = compare_option_sets(small_config(), OptionSetMode::SubsetsInOrder,
                                              OptionSetMode::SubsetsInOrder, 2);
  CHECK(r.label_a == "subsets-in-order");
  CHECK(r.relative_gain == 0.0);
  CHECK(r.trailing_mean_a == r.trailing_mean_b);
  CHECK(r.curve_a == r.curve_b);
  CHECK(r.curve_a.size() == 3);
}

TEST_CASE("rollouts run for the requested number of steps") {
  const TrainResult tr = train(small_config());
  const RolloutResult r = rollout(tr, 99, 50, 0.0, false);
  REQUIRE(r.steps.size() == 50);
  CHECK(r.traj.size() == 51);
  const std::vector<std::string> ids = tr.option_ids();
  for (std::size_t t = 0; t < r.steps.size(); ++t) {
    CHECK(r.steps[t].t == t);
    CHECK(std::find(ids.begin(), ids.end(), r.steps[t].option_id) != ids.end());
    CHECK(r.steps[t].action >= 0);
    CHECK(r.steps[t].action < 4);
    CHECK(r.steps[t].state == r.traj[t]);
  }

  // same seed, same trace; exploration path is reproducible too
  const RolloutResult r2 = rollout(tr, 99, 50, 0.0, false);
  CHECK(trace_csv(r.steps, tr.env.action_set()) == trace_csv(r2.steps, tr.env.action_set()));
  const RolloutResult e1 = rollout(tr, 5, 40, 0.3, false);
  const RolloutResult e2 = rollout(tr, 5, 40, 0.3, false);
  CHECK(trace_csv(e1.steps, tr.env.action_set()) == trace_csv(e2.steps, tr.env.action_set()));

  // a slip-free replay only ever moves where the policy points
  const RolloutResult det = rollout(tr, 99, 30, 0.0, true);
  CHECK(det.traj.size() == 31);
}

TEST_CASE("doubles survive the shortest-round-trip rendering") {
  for (double v : {0.1, -2.5, 1e-9, 0.7000000000000001, 12345.6789, 0.0})
    CHECK(parse_double(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(parse_double("zebra"), IoError);
  CHECK_THROWS_AS(parse_double("1.5x"), IoError);
}

TEST_CASE("table exports reload exactly and rewrite byte for byte") {
  const TrainResult tr = train(small_config());
  const std::filesystem::path dir = fresh_dir("hstl-test-export");
  const std::vector<std::string> files = export_run(tr, dir.string());
  CHECK(files.size() >= 7);

  // reload into a fresh setup and compare raw tables
  TrainResult blank = setup(tr.config);
  load_run_tables(blank, dir.string());
  CHECK(blank.learning.option_q.raw() == tr.learning.option_q.raw());
  for (std::size_t j = 0; j < tr.learning.flat_q.size(); ++j)
    CHECK(blank.learning.flat_q[j].raw() == tr.learning.flat_q[j].raw());

  // exporting the reloaded tables reproduces the same bytes
  blank.episodes = tr.episodes;
  blank.option_counts = tr.option_counts;
  const std::filesystem::path dir2 = fresh_dir("hstl-test-export-2");
  export_run(blank, dir2.string());
  for (const std::string& f : files) {
    const std::filesystem::path rel = std::filesystem::path(f).filename();
    CHECK(read_text_file((dir2 / rel).string()) == read_text_file(f));
  }

  // the manifest identifies the run without timestamps
  const nlohmann::json manifest =
      nlohmann::json::parse(read_text_file((dir / "run_manifest.json").string()));
  CHECK(manifest.at("config_hash").get<std::string>() == config_hash(tr.config));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 7);
  CHECK(manifest.at("option_ids").size() == 15);

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("q-table CSV rejects malformed input") {
  const GridWorld env(2, 2, 1.0, 0.0);
  QTable q(4, 2, 0.0);
  q.at(3, 1) = -1.25;
  const std::vector<std::string> cols{"a0", "a1"};
  const std::string text = qtable_csv(q, env, "col", cols);
  const QTable back = load_qtable_csv(text, env, "col", cols);
  CHECK(back.raw() == q.raw());

  CHECK_THROWS_AS(load_qtable_csv("x,y,col,value\n", env, "col", cols), IoError);
  CHECK_THROWS_AS(load_qtable_csv("bad header\n" + text.substr(text.find('\n') + 1), env, "col", cols),
                  IoError);
  std::string dup = text + text.substr(text.find('\n') + 1);
  CHECK_THROWS_AS(load_qtable_csv(dup, env, "col", cols), IoError);
}
