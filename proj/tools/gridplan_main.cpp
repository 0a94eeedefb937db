// Copyright 2026 The gridplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gridplan: plan, filter, learn and evaluate on 2-D grid MDPs.
//
// Subcommands:
//   solve             value-iterate a ground-truth (or loaded) model
//   learn-transition  learn transition filters from random rollouts
//   learn-reward      learn a reward function from expert demonstrations
//   benchmark         time the convolutional vs loop Bellman update
//   evaluate          compare two policies under a ground-truth model
//
// Exit codes: 0 success, 1 config/IO error, 2 invariant violation in inputs.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridplan/bench.hpp"
#include "gridplan/config.hpp"
#include "gridplan/environment.hpp"
#include "gridplan/filter.hpp"
#include "gridplan/io.hpp"
#include "gridplan/metrics.hpp"
#include "gridplan/reward_learning.hpp"
#include "gridplan/transition_learning.hpp"
#include "gridplan/vi.hpp"

namespace fs = std::filesystem;
using namespace gridplan;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_override;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "run configuration file")->required();
  cmd->add_option("--set", args.overrides, "override a config key, e.g. --set dims.nd=10");
  cmd->add_option("-o,--out", args.out_override, "output directory (overrides config key 'out')");
}

Config load_config(const CommonArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  for (const std::string& kv : args.overrides) cfg.set(kv);
  if (!args.out_override.empty()) cfg.set("out", args.out_override);
  return cfg;
}

GridDims dims_from_config(const Config& cfg) {
  return GridDims(cfg.get_int("dims.nd", 20), cfg.get_int("dims.na", 9), cfg.get_int("dims.w", 1),
                  cfg.get_int("dims.h", 1), cfg.get_double("dims.gamma", 0.95));
}

ObservationKind obs_kind_from_string(const std::string& s) {
  if (s == "delta") return ObservationKind::kDelta;
  if (s == "uniform") return ObservationKind::kUniform;
  if (s == "peaked") return ObservationKind::kPeaked;
  throw ParseError("env.obs: expected delta|uniform|peaked, got '" + s + "'");
}

std::vector<RewardPlacement> parse_rewards(const std::string& text) {
  std::vector<RewardPlacement> out;
  std::istringstream list(text);
  std::string item;
  while (std::getline(list, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(item);
    std::string i, j, a, value;
    if (!std::getline(fields, i, ',') || !std::getline(fields, j, ',') ||
        !std::getline(fields, a, ',') || !std::getline(fields, value))
      throw ParseError("env.rewards: expected 'i,j,action-or-*,value' items, got '" + item + "'");
    auto strip = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    strip(i), strip(j), strip(a), strip(value);
    try {
      RewardPlacement p;
      p.s = State{std::stoi(i), std::stoi(j)};
      p.action = a == "*" ? -1 : std::stoi(a);
      p.value = std::stod(value);
      out.push_back(p);
    } catch (const std::exception&) {
      throw ParseError("env.rewards: could not parse item '" + item + "'");
    }
  }
  return out;
}

EnvironmentSpec env_spec_from_config(const Config& cfg) {
  EnvironmentSpec spec;
  spec.preset = cfg.get_string("env.preset", "noisy-compass");
  spec.slip = cfg.get_double("env.slip", 0.2);
  spec.obs = obs_kind_from_string(cfg.get_string("env.obs", "uniform"));
  spec.obs_center = cfg.get_double("env.obs_center", 0.6);
  spec.seed = cfg.get_u64("env.seed", cfg.get_u64("seed", 0));
  spec.rewards = parse_rewards(cfg.get_string("env.rewards", ""));
  return spec;
}

// Ground truth comes from the preset; individual pieces can be replaced by
// model files (env.transition_file / env.reward_file / env.observation_file).
Environment environment_from_config(const Config& cfg, const GridDims& dims) {
  Environment env = make_environment(dims, env_spec_from_config(cfg));
  if (cfg.has("env.transition_file")) {
    env.transition = load_transition(cfg.get_string("env.transition_file"));
    if (env.transition.num_actions() != dims.na || env.transition.nt() != dims.nt())
      throw InvariantViolation("env.transition_file does not match dims");
  }
  if (cfg.has("env.reward_file")) {
    env.reward = load_reward(cfg.get_string("env.reward_file"));
    if (env.reward.num_actions() != dims.na || env.reward.nd() != dims.nd)
      throw InvariantViolation("env.reward_file does not match dims");
  }
  if (cfg.has("env.observation_file")) {
    env.observation = load_observation(cfg.get_string("env.observation_file"));
    if (env.observation.no() != dims.no())
      throw InvariantViolation("env.observation_file does not match dims");
  }
  return env;
}

ViOptions vi_options_from_config(const Config& cfg) {
  ViOptions opt;
  opt.epsilon = cfg.get_double("vi.epsilon", 1e-4);
  opt.max_iter = cfg.get_int("vi.max_iter", 0);
  opt.parallel = cfg.get_bool("vi.parallel", false);
  return opt;
}

fs::path prepare_out_dir(const Config& cfg) {
  const fs::path out = cfg.get_string("out", "run_out");
  fs::create_directories(out);
  return out;
}

std::uint64_t root_seed(const Config& cfg) {
  if (!cfg.has("seed")) throw ParseError("missing required config key 'seed'");
  return cfg.get_u64("seed", 0);
}

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

std::vector<Trajectory> generate_rollouts(const Environment& env, const Policy* policy, int count,
                                          int steps, Rng base, const fs::path& dir,
                                          const std::string& stem) {
  fs::create_directories(dir);
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Rng rng = base.split(stem + "." + std::to_string(k));
    out.push_back(generate_trajectory(env, policy, steps, rng));
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03d.csv", stem.c_str(), k);
    save_trajectory(dir / name, out.back());
  }
  return out;
}

int cmd_solve(const CommonArgs& args) {
  const Config cfg = load_config(args);
  const GridDims dims = dims_from_config(cfg);
  const Environment env = environment_from_config(cfg, dims);
  root_seed(cfg);  // required even where unused, so reruns are fully pinned
  const fs::path out = prepare_out_dir(cfg);

  const ViResult res = value_iterate(env.transition, env.reward, dims.gamma, vi_options_from_config(cfg));

  save_value(out / "value.txt", res.v);
  save_q(out / "q.txt", res.q);
  save_policy(out / "policy.txt", res.policy, dims.na);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < res.residual_log.size(); ++k)
    rows.push_back({std::to_string(k + 1), format_double(res.residual_log[k])});
  write_csv(out / "iterations.csv", "iteration,residual", rows);

  std::cout << "solve: " << res.iterations << " iterations, final residual "
            << format_double(res.final_residual) << "\n"
            << "wrote value.txt q.txt policy.txt iterations.csv to " << out.string() << "\n";
  return 0;
}

BpTrainConfig bp_config_from(const Config& cfg, std::uint64_t seed) {
  BpTrainConfig bp;
  const std::string rec = cfg.get_string("bp.recurrence", "target");
  if (rec == "target")
    bp.recurrence = Recurrence::kTarget;
  else if (rec == "output")
    bp.recurrence = Recurrence::kOutput;
  else
    throw ParseError("bp.recurrence: expected target|output, got '" + rec + "'");
  const std::string sched = cfg.get_string("bp.schedule", "filter-wise-decay");
  if (sched == "rmsprop")
    bp.schedule = BpSchedule::kRmsProp;
  else if (sched == "linear-decay")
    bp.schedule = BpSchedule::kLinearDecay;
  else if (sched == "filter-wise-decay")
    bp.schedule = BpSchedule::kFilterWiseDecay;
  else
    throw ParseError("bp.schedule: expected rmsprop|linear-decay|filter-wise-decay, got '" + sched + "'");
  bp.alpha0 = cfg.get_double("bp.alpha0", 1.0);
  bp.rmsprop_rho = cfg.get_double("bp.rmsprop_rho", 0.9);
  bp.rmsprop_eps = cfg.get_double("bp.rmsprop_eps", 1e-8);
  bp.decay = cfg.get_double("bp.decay", 0.01);
  bp.epochs = cfg.get_int("bp.epochs", 1);
  bp.grad_clip = cfg.get_double("bp.grad_clip", 1.0);
  bp.seed = seed;
  return bp;
}

int cmd_learn_transition(const CommonArgs& args) {
  const Config cfg = load_config(args);
  const GridDims dims = dims_from_config(cfg);
  const Environment env = environment_from_config(cfg, dims);
  const Rng base(root_seed(cfg));
  const fs::path out = prepare_out_dir(cfg);

  const int n_traj = cfg.get_int("data.trajectories", 40);
  const int n_steps = cfg.get_int("data.steps", 200);
  const std::vector<Trajectory> data =
      generate_rollouts(env, nullptr, n_traj, n_steps, base.split("data"), out / "trajectories", "traj");

  const std::string algorithm = cfg.get_string("bp.algorithm", "bp");
  std::vector<std::string> algorithms;
  if (algorithm == "all")
    algorithms = {"bp", "naive-count", "weighted-count"};
  else if (algorithm == "bp" || algorithm == "naive-count" || algorithm == "weighted-count")
    algorithms = {algorithm};
  else
    throw ParseError("bp.algorithm: expected bp|naive-count|weighted-count|all, got '" + algorithm + "'");

  const ViOptions vi_opt = vi_options_from_config(cfg);
  const ViResult reference = value_iterate(env.transition, env.reward, dims.gamma, vi_opt);

  std::vector<std::vector<std::string>> comparison;
  for (const std::string& alg : algorithms) {
    TransitionModel learnt;
    long resets = 0;
    if (alg == "bp") {
      const BpTrainConfig bp = bp_config_from(cfg, base.split("bp").root_seed());
      BpTrainReport report = train_transition(data, env.observation, dims, bp, &env.transition);
      std::vector<std::vector<std::string>> loss_rows;
      for (const BpLossSample& s : report.loss_curve)
        loss_rows.push_back({std::to_string(s.step), format_double(s.loss), std::to_string(s.action),
                             format_double(s.alpha)});
      write_csv(out / "loss_bp.csv", "step,loss,action,alpha", loss_rows);
      learnt = std::move(report.learnt);
      resets = report.resets;
    } else if (alg == "naive-count") {
      learnt = naive_count(data, dims);
    } else {
      learnt = weighted_count(data, env.observation, dims);
    }
    save_transition(out / ("transition_" + alg + ".txt"), learnt, dims.nd);

    // Replan with the ground-truth reward and compare against the reference
    // policy.
    const ViResult replanned = value_iterate(learnt, env.reward, dims.gamma, vi_opt);
    const double err = transition_error(learnt, env.transition);
    const double accuracy = replanning_accuracy(replanned.policy, reference.policy);
    comparison.push_back({alg, format_double(err), pct(accuracy), std::to_string(resets)});
    std::cout << "learn-transition [" << alg << "]: transition_error " << format_double(err)
              << ", replanning accuracy " << pct(accuracy) << "%, resets " << resets << "\n";
  }
  write_csv(out / "comparison.csv", "algorithm,transition_error,replanning_accuracy_pct,resets",
            comparison);
  std::cout << "wrote models and comparison.csv to " << out.string() << "\n";
  return 0;
}

QmdpTrainConfig qmdp_config_from(const Config& cfg, std::uint64_t seed) {
  QmdpTrainConfig q;
  const std::string sched = cfg.get_string("qmdp.schedule", "linear-decay");
  if (sched == "rmsprop")
    q.schedule = QmdpSchedule::kRmsProp;
  else if (sched == "linear-decay")
    q.schedule = QmdpSchedule::kLinearDecay;
  else
    throw ParseError("qmdp.schedule: expected rmsprop|linear-decay, got '" + sched + "'");
  const std::string replay = cfg.get_string("qmdp.replay", "used");
  if (replay == "used")
    q.replay = true;
  else if (replay == "none")
    q.replay = false;
  else
    throw ParseError("qmdp.replay: expected used|none, got '" + replay + "'");
  const std::string feedback = cfg.get_string("qmdp.feedback", "delayed");
  if (feedback == "delayed")
    q.feedback = Feedback::kDelayed;
  else if (feedback == "immediate")
    q.feedback = Feedback::kImmediate;
  else
    throw ParseError("qmdp.feedback: expected delayed|immediate, got '" + feedback + "'");
  q.alpha0 = cfg.get_double("qmdp.alpha0", 1.0);
  q.replay_capacity = static_cast<std::size_t>(cfg.get_int("qmdp.replay_capacity", 0));
  q.epochs = cfg.get_int("qmdp.epochs", 3);
  q.vi_epsilon = cfg.get_double("qmdp.vi_epsilon", 1e-2);
  q.rmsprop_rho = cfg.get_double("qmdp.rmsprop_rho", 0.9);
  q.rmsprop_eps = cfg.get_double("qmdp.rmsprop_eps", 1e-8);
  q.seed = seed;
  return q;
}

int cmd_learn_reward(const CommonArgs& args) {
  const Config cfg = load_config(args);
  const GridDims dims = dims_from_config(cfg);
  const Environment env = environment_from_config(cfg, dims);
  const Rng base(root_seed(cfg));
  const fs::path out = prepare_out_dir(cfg);

  // Transition model backing belief tracking and replanning: ground truth or
  // a previously learnt model.
  const std::string t_source = cfg.get_string("qmdp.transition", "truth");
  TransitionModel t_model;
  if (t_source == "truth") {
    t_model = env.transition;
  } else {
    if (!fs::exists(t_source))
      throw ParseError("qmdp.transition: model file '" + t_source + "' not found");
    t_model = load_transition(t_source);
    if (t_model.num_actions() != dims.na || t_model.nt() != dims.nt())
      throw InvariantViolation("qmdp.transition model does not match dims");
  }

  const ViOptions eval_vi{1e-4, 0, false};
  const ViResult reference = value_iterate(env.transition, env.reward, dims.gamma, eval_vi);
  const std::vector<Trajectory> expert = generate_rollouts(
      env, &reference.policy, cfg.get_int("expert.trajectories", 20),
      cfg.get_int("expert.steps", 30), base.split("expert"), out / "expert", "expert");

  const QmdpTrainConfig qcfg = qmdp_config_from(cfg, base.split("qmdp").root_seed());
  const QmdpTrainReport report = train_reward(expert, t_model, env.observation, dims, qcfg);

  save_reward(out / "reward_qmdp.txt", report.learnt_reward);
  save_q(out / "q_qmdp.txt", report.final_q);
  save_policy(out / "policy_qmdp.txt", report.policy, dims.na);
  std::vector<std::vector<std::string>> loss_rows;
  for (const QmdpLossSample& s : report.loss_curve)
    loss_rows.push_back(
        {std::to_string(s.step), format_double(s.cross_entropy), std::to_string(s.replans)});
  write_csv(out / "loss_qmdp.csv", "step,cross_entropy,replans", loss_rows);

  // Evaluate the learnt policy under the true models.
  const ValueFunction v_orig =
      policy_evaluation(reference.policy, env.transition, env.reward, dims.gamma, 1e-6);
  const ValueFunction v_learnt =
      policy_evaluation(report.policy, env.transition, env.reward, dims.gamma, 1e-6);
  const RewardIncrease eri = expected_reward_increase(v_learnt, v_orig);
  EvalReport eval;
  eval.replanning_accuracy_pct = replanning_accuracy(report.policy, reference.policy);
  eval.expected_reward_increase_pct = eri.pct;
  eval.states_excluded = eri.excluded;
  write_csv(out / "eval.csv", "replanning_accuracy_pct,expected_reward_increase_pct,states_excluded",
            {{format_double(eval.replanning_accuracy_pct), format_double(eval.expected_reward_increase_pct),
              std::to_string(eval.states_excluded)}});

  std::cout << "learn-reward: replanning accuracy " << pct(eval.replanning_accuracy_pct)
            << "%, expected reward increase " << pct(eval.expected_reward_increase_pct)
            << "% (excluded " << eval.states_excluded << "), replans " << report.replans
            << ", belief resets " << report.belief_resets << "\n"
            << "wrote reward_qmdp.txt q_qmdp.txt policy_qmdp.txt loss_qmdp.csv eval.csv to "
            << out.string() << "\n";
  return 0;
}

int cmd_benchmark(const std::string& sizes_text, int reps, int na, int w, bool parallel,
                  const std::string& out_file) {
  std::vector<int> sizes;
  std::istringstream list(sizes_text);
  std::string item;
  while (std::getline(list, item, ',')) {
    try {
      sizes.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("--sizes: expected comma-separated integers, got '" + item + "'");
    }
  }
  const std::vector<BenchmarkRow> rows = benchmark_iteration(sizes, na, w, reps, parallel);

  std::vector<std::vector<std::string>> csv;
  for (const BenchmarkRow& r : rows)
    csv.push_back({std::to_string(r.nd), std::to_string(r.states), format_double(r.conv_ns),
                   format_double(r.naive_ns)});
  write_csv(out_file, "nd,states,conv_ns,naive_ns", csv);

  for (const BenchmarkRow& r : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "nd=%4d states=%6ld conv %12.0f ns  naive %12.0f ns  ratio %6.2fx",
                  r.nd, r.states, r.conv_ns, r.naive_ns, r.naive_ns / r.conv_ns);
    std::cout << line << "\n";
  }
  if (rows.size() >= 2) {
    char line[96];
    std::snprintf(line, sizeof(line), "log-log slope of conv time vs states: %.3f", loglog_slope(rows));
    std::cout << line << "\n";
  }
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

int cmd_evaluate(const std::string& reference_path, const std::string& candidate_path,
                 const CommonArgs& args, const std::string& out_file) {
  const Config cfg = load_config(args);
  const GridDims dims = dims_from_config(cfg);
  const Environment env = environment_from_config(cfg, dims);

  const Policy reference = load_policy(reference_path);
  const Policy candidate = load_policy(candidate_path);
  if (reference.nd != dims.nd || candidate.nd != dims.nd)
    throw InvariantViolation("evaluate: policy grid size does not match dims");

  const ValueFunction v_ref =
      policy_evaluation(reference, env.transition, env.reward, dims.gamma, 1e-6);
  const ValueFunction v_cand =
      policy_evaluation(candidate, env.transition, env.reward, dims.gamma, 1e-6);
  const RewardIncrease eri = expected_reward_increase(v_cand, v_ref);

  EvalReport eval;
  eval.replanning_accuracy_pct = replanning_accuracy(candidate, reference);
  eval.expected_reward_increase_pct = eri.pct;
  eval.states_excluded = eri.excluded;

  std::cout << "evaluate: accuracy " << pct(eval.replanning_accuracy_pct)
            << "%, expected reward increase " << pct(eval.expected_reward_increase_pct)
            << "% (excluded " << eval.states_excluded << ")\n";
  if (!out_file.empty())
    write_csv(out_file, "replanning_accuracy_pct,expected_reward_increase_pct,states_excluded",
              {{format_double(eval.replanning_accuracy_pct),
                format_double(eval.expected_reward_increase_pct),
                std::to_string(eval.states_excluded)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridplan: recurrent-convolutional planning and model learning on grid MDPs"};
  app.require_subcommand(1);

  CommonArgs solve_args, lt_args, lr_args, eval_args;
  add_common_options(app.add_subcommand("solve", "run value iteration and write the plan"), solve_args);
  add_common_options(
      app.add_subcommand("learn-transition", "learn transition filters from random rollouts"), lt_args);
  add_common_options(
      app.add_subcommand("learn-reward", "learn a reward function from expert demonstrations"), lr_args);

  auto* bench = app.add_subcommand("benchmark", "time convolutional vs loop Bellman updates");
  std::string sizes = "10,20,40,80,160";
  int reps = 7, bench_na = 9, bench_w = 1;
  bool bench_parallel = false;
  std::string bench_out = "benchmark.csv";
  bench->add_option("--sizes", sizes, "comma-separated grid sides")->capture_default_str();
  bench->add_option("--reps", reps, "timing repetitions per size")->capture_default_str();
  bench->add_option("--na", bench_na, "action count")->capture_default_str();
  bench->add_option("--w", bench_w, "transition radius")->capture_default_str();
  bench->add_flag("--parallel", bench_parallel, "use the parallel per-action path");
  bench->add_option("-o,--out", bench_out, "output CSV path")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "compare two policies under ground truth");
  std::string ref_path, cand_path, eval_out;
  evaluate->add_option("--reference", ref_path, "reference policy file")->required();
  evaluate->add_option("--candidate", cand_path, "candidate policy file")->required();
  add_common_options(evaluate, eval_args);
  evaluate->add_option("--report", eval_out, "optional CSV to write the report to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("solve")) return cmd_solve(solve_args);
    if (app.got_subcommand("learn-transition")) return cmd_learn_transition(lt_args);
    if (app.got_subcommand("learn-reward")) return cmd_learn_reward(lr_args);
    if (app.got_subcommand("benchmark"))
      return cmd_benchmark(sizes, reps, bench_na, bench_w, bench_parallel, bench_out);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(ref_path, cand_path, eval_args, eval_out);
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
