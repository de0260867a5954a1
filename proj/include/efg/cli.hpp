#pragma once

// Command-line surface: `solve` runs a solver and writes a convergence CSV,
// `eval` prints the NashConv of a saved policy, `compare` merges run CSVs
// into one long-format table, `games` lists the built-in games. Exit codes:
// 0 success, 1 solver/policy errors, 2 bad arguments.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "efg/convergence.hpp"
#include "efg/games.hpp"
#include "efg/policy.hpp"
#include "efg/solvers.hpp"

namespace efg {

namespace cli_detail {

inline bool parse_lr(const std::string& text, StepSize& step) {
  if (text.empty()) return true;  // keep algorithm default
  if (text == "sqrt") {
    step = {LrSchedule::kInvSqrt, 1.0};
    return true;
  }
  if (text.rfind("sqrt:", 0) == 0) {
    step.schedule = LrSchedule::kInvSqrt;
    return (step.scale = std::atof(text.c_str() + 5)) > 0.0;
  }
  step.schedule = LrSchedule::kConstant;
  return (step.scale = std::atof(text.c_str())) > 0.0;
}

inline std::string format_sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Equilibrium solvers for two-player zero-sum imperfect-information games"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command-line flags win on conflict");

  // --- solve ---------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Run a solver and write a convergence-curve CSV");
  std::string game_id, algorithm_id_arg, lr_text, out_path, save_policy_path, save_best_path;
  long long iterations = 1000;
  long long eval_every = 0;  // 0: powers of two plus the final iterate
  bool q_fallback = false, measure_regret = false, deterministic = false;
  uint64_t seed = 0;
  NeuralOptions neural;
  solve->add_option("--game", game_id, "Game id (see `games`)")->required();
  solve->add_option("--algorithm", algorithm_id_arg, "Algorithm id")->required();
  solve->add_option("--iterations", iterations, "Iteration budget T");
  solve->add_option("--eval-every", eval_every,
                    "Evaluation cadence k (records at k, 2k, ...); 0 records at powers of two");
  solve->add_option("--lr", lr_text,
                    "Step size: a constant, `sqrt` for t^-1/2, or `sqrt:<scale>`");
  solve->add_option("--out", out_path, "Output CSV path")->required();
  solve->add_option("--seed", seed, "Weight-init seed for ed_neural");
  solve->add_flag("--q-fallback", q_fallback,
                  "ed_q_l2: fall back to counterfactual values at zero-reach states");
  solve->add_flag("--measure-regret", measure_regret,
                  "Accumulate per-player online regret (one extra best response per step)");
  solve->add_flag("--deterministic", deterministic, "Fixed seed; wall_ms reported as 0");
  solve->add_option("--hidden-layers", neural.hidden_layers, "ed_neural: hidden layer count")
      ->check(CLI::Range(1, 5));
  solve->add_option("--hidden-width", neural.hidden_width, "ed_neural: hidden layer width")
      ->check(CLI::IsMember({64, 128, 256}));
  solve->add_option("--reg-weight", neural.reg_weight, "ed_neural: weight regularization");
  solve->add_option("--save-policy", save_policy_path, "Also save the reported policy as JSON");
  solve->add_option("--save-best-policy", save_best_path,
                    "Also save the best-iterate policy as JSON (ED / CFR-BR)");

  // --- eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Evaluate a saved policy: NashConv + exploitability");
  std::string eval_game;
  std::vector<std::string> policy_paths;
  eval->add_option("--game", eval_game, "Game id")->required();
  eval->add_option("--policy", policy_paths, "Policy JSON file (repeat to merge players)")
      ->required();

  // --- compare -------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "Merge run CSVs into one long-format table");
  std::vector<std::string> csv_paths;
  std::string compare_out;
  compare->add_option("files", csv_paths, "Input CSV files");
  compare->add_option("--out", compare_out, "Output path (default: stdout)");

  // --- games ---------------------------------------------------------------
  auto* games_cmd = app.add_subcommand("games", "List games and information state counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << std::endl;
    return 2;
  }

  try {
    if (solve->parsed()) {
      SolverConfig config;
      config.game_name = game_id;
      const std::optional<Algorithm> alg = algorithm_from_id(algorithm_id_arg);
      if (!alg) {
        std::cerr << "unknown algorithm: " << algorithm_id_arg << "\n" << solve->help();
        return 2;
      }
      config.algorithm = *alg;
      config.iterations = iterations;
      if (eval_every < 0) {
        std::cerr << "--eval-every must be >= 0\n";
        return 2;
      }
      if (eval_every > 0) config.eval_every = eval_every;
      if (!cli_detail::parse_lr(lr_text, config.step)) {
        std::cerr << "bad --lr value: " << lr_text << "\n" << solve->help();
        return 2;
      }
      config.q_value_fallback = q_fallback;
      config.measure_regret = measure_regret;
      config.neural = neural;
      config.seed = seed;
      const char* env = std::getenv("ED_DETERMINISTIC");
      if (env && std::string(env) == "1") {
        config.deterministic = true;
        config.seed = 0;  // force the fixed default seed
      } else {
        config.deterministic = deterministic;
      }

      std::shared_ptr<const Game> game;
      try {
        game = build_game(config.game_name);
      } catch (const GameError& e) {
        std::cerr << e.what() << "\n" << solve->help();
        return 2;
      }
      const GameTree tree = build_game_tree(game);
      try {
        const RunResult result = run(tree, config);
        write_csv(out_path, result.records, result.metadata);
        if (!save_policy_path.empty()) {
          save_policy(result.final_policy, config.game_name, -1, save_policy_path);
        }
        if (!save_best_path.empty()) {
          if (!result.best_policy) {
            std::cerr << "no best-iterate policy for " << algorithm_id_arg << "\n";
            return 1;
          }
          save_policy(*result.best_policy, config.game_name, -1, save_best_path);
        }
        if (config.measure_regret) {
          std::cout << "average_regret_p0=" << cli_detail::format_sig12(result.average_regret[0])
                    << " average_regret_p1=" << cli_detail::format_sig12(result.average_regret[1])
                    << "\n";
        }
      } catch (const SolverRunError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }

    if (eval->parsed()) {
      std::shared_ptr<const Game> game;
      try {
        game = build_game(eval_game);
      } catch (const GameError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      TabularPolicy joint;
      for (const std::string& path : policy_paths) {
        PolicyDocument doc = load_policy(path);
        if (doc.game != game->name() && doc.game != eval_game) {
          std::cerr << "policy file " << path << " is for game '" << doc.game << "'\n";
          return 1;
        }
        for (auto& [key, probs] : doc.policy.table) {
          joint.table[key] = std::move(probs);
        }
      }
      const GameTree tree = build_game_tree(game);
      const DensePolicy dense = dense_from_tabular(tree, joint);
      const std::array<double, 2> delta = exploitability(tree, dense);
      std::cout << "nashconv=" << cli_detail::format_sig12(delta[0] + delta[1])
                << " exploitability_p0=" << cli_detail::format_sig12(delta[0])
                << " exploitability_p1=" << cli_detail::format_sig12(delta[1]) << "\n";
      return 0;
    }

    if (compare->parsed()) {
      if (csv_paths.empty()) {
        std::cerr << "compare: no input files\n" << compare->help();
        return 2;
      }
      std::string merged;
      try {
        std::vector<CsvDocument> docs;
        for (const std::string& path : csv_paths) docs.push_back(load_csv(path));
        merged = merge_csv_documents(docs, csv_paths);
      } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      if (compare_out.empty()) {
        std::cout << merged;
      } else {
        std::ofstream f(compare_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + compare_out + " for writing");
        f << merged;
      }
      return 0;
    }

    if (games_cmd->parsed()) {
      for (const std::string& name : game_names()) {
        const std::shared_ptr<const Game> game = build_game(name);
        const GameTree tree = build_game_tree(game);
        std::cout << name << ": histories=" << tree.nodes.size()
                  << " infostates_p0=" << tree.num_infostates(0)
                  << " infostates_p1=" << tree.num_infostates(1)
                  << " encoding_bits=" << game->encoding_size() << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace efg
