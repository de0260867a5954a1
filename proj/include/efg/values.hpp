#pragma once

// Exact full-tree evaluation under a joint policy: root values, reach
// decompositions, normalized q-values, and the unnormalized counterfactual
// values used by CFR-style updates. One downward reach pass and one upward
// value pass produce everything.

#include <array>
#include <string>
#include <vector>

#include "efg/tree.hpp"

namespace efg {

// Raised when a q-value is requested at an information state whose opponent
// and chance reach mass is exactly zero (the normalization is undefined).
struct ZeroReachMassError : GameError {
  explicit ZeroReachMassError(const std::string& key)
      : GameError("zero reach mass at information state '" + key + "'"), infostate_key(key) {}
  std::string infostate_key;
};

// Per-history reach probabilities, factored into each player's own
// contribution and the chance contribution. Chance is folded into the
// opponents' side of every decomposition.
struct ReachDecomposition {
  std::vector<double> own0, own1, chance;

  double own(Player p, int node) const { return p == 0 ? own0[node] : own1[node]; }
  double opp(Player p, int node) const {
    return (p == 0 ? own1[node] : own0[node]) * chance[node];
  }
  double total(int node) const { return own0[node] * own1[node] * chance[node]; }
};

inline ReachDecomposition compute_reaches(const GameTree& tree, const DensePolicy& policy) {
  const int n = static_cast<int>(tree.nodes.size());
  ReachDecomposition r;
  r.own0.assign(n, 0.0);
  r.own1.assign(n, 0.0);
  r.chance.assign(n, 0.0);
  r.own0[0] = r.own1[0] = r.chance[0] = 1.0;
  for (int node = 0; node < n; ++node) {
    const GameTree::Node& nd = tree.nodes[node];
    for (int a = 0; a < nd.num_children; ++a) {
      const int kid = tree.children[nd.child_begin + a];
      r.own0[kid] = r.own0[node];
      r.own1[kid] = r.own1[node];
      r.chance[kid] = r.chance[node];
      if (nd.player == kChancePlayer) {
        r.chance[kid] *= tree.child_prob[nd.child_begin + a];
      } else if (nd.player == 0) {
        r.own0[kid] *= policy.probs[nd.infostate][a];
      } else {
        r.own1[kid] *= policy.probs[nd.infostate][a];
      }
    }
  }
  return r;
}

struct TreeEvaluation {
  ReachDecomposition reaches;
  std::vector<double> value0;  // per node: expected value for player 0 under the joint

  double root_value(Player p) const { return p == 0 ? value0[0] : -value0[0]; }
};

inline TreeEvaluation evaluate_tree(const GameTree& tree, const DensePolicy& policy) {
  TreeEvaluation eval;
  eval.reaches = compute_reaches(tree, policy);
  const int n = static_cast<int>(tree.nodes.size());
  eval.value0.assign(n, 0.0);
  // Children sit after their parent in preorder, so a reverse sweep is a
  // bottom-up pass.
  for (int node = n - 1; node >= 0; --node) {
    const GameTree::Node& nd = tree.nodes[node];
    if (nd.player == kTerminalPlayer) {
      eval.value0[node] = nd.utility0;
      continue;
    }
    double v = 0.0;
    for (int a = 0; a < nd.num_children; ++a) {
      const double w = nd.player == kChancePlayer ? tree.child_prob[nd.child_begin + a]
                                                  : policy.probs[nd.infostate][a];
      v += w * eval.value0[tree.children[nd.child_begin + a]];
    }
    eval.value0[node] = v;
  }
  return eval;
}

inline std::array<double, 2> expected_value(const GameTree& tree, const DensePolicy& policy) {
  const TreeEvaluation eval = evaluate_tree(tree, policy);
  return {eval.value0[0], -eval.value0[0]};
}

inline std::array<double, 2> expected_value(const Game& game, const TabularPolicy& joint) {
  GameTree tree = build_game_tree(game);
  return expected_value(tree, dense_from_tabular(tree, joint));
}

enum class ValueMode {
  kQ,              // normalized action values
  kCounterfactual  // opponent-and-chance weighted, unnormalized
};

enum class ZeroMassHandling {
  kError,    // raise ZeroReachMassError
  kFallback  // report the counterfactual values and flag the state
};

// Per-infostate action values for one player, indexed by the player's
// infostate offset (global index minus `base`).
struct ValueReport {
  Player player = 0;
  ValueMode mode = ValueMode::kCounterfactual;
  int base = 0;
  std::vector<std::vector<double>> action_values;
  std::vector<double> state_values;  // v or v^c
  std::vector<double> mass;          // B_{-i}(pi, s)
  std::vector<double> own_reach;     // eta_i(s)
  std::vector<uint8_t> degenerate;   // zero-mass states reported in fallback mode

  const std::vector<double>& q(int global_infostate) const {
    return action_values[global_infostate - base];
  }
};

inline ValueReport action_values_from(const GameTree& tree, const TreeEvaluation& eval,
                                      const DensePolicy& policy, Player player, ValueMode mode,
                                      ZeroMassHandling handling = ZeroMassHandling::kError) {
  ValueReport report;
  report.player = player;
  report.mode = mode;
  report.base = tree.infostate_begin[player];
  const int count = tree.num_infostates(player);
  report.action_values.resize(count);
  report.state_values.assign(count, 0.0);
  report.mass.assign(count, 0.0);
  report.own_reach.assign(count, 0.0);
  report.degenerate.assign(count, 0);

  for (int s = 0; s < count; ++s) {
    const auto& entry = tree.infostates[report.base + s];
    report.action_values[s].assign(entry.num_actions, 0.0);
    for (int node : entry.members) {
      const double w = eval.reaches.opp(player, node);
      report.mass[s] += w;
      for (int a = 0; a < entry.num_actions; ++a) {
        const double child_value = eval.value0[tree.child(node, a)];
        report.action_values[s][a] += w * (player == 0 ? child_value : -child_value);
      }
    }
    report.own_reach[s] = eval.reaches.own(player, entry.members.front());

    if (mode == ValueMode::kQ) {
      if (report.mass[s] == 0.0) {
        if (handling == ZeroMassHandling::kError) {
          throw ZeroReachMassError(entry.key);
        }
        report.degenerate[s] = 1;  // keep the counterfactual values
      } else {
        for (double& q : report.action_values[s]) q /= report.mass[s];
      }
    }
    const std::vector<double>& pi = policy.probs[report.base + s];
    for (int a = 0; a < entry.num_actions; ++a) {
      report.state_values[s] += pi[a] * report.action_values[s][a];
    }
  }
  return report;
}

inline ValueReport q_values(const GameTree& tree, const DensePolicy& policy, Player player,
                            ZeroMassHandling handling = ZeroMassHandling::kError) {
  return action_values_from(tree, evaluate_tree(tree, policy), policy, player, ValueMode::kQ,
                            handling);
}

inline ValueReport counterfactual_values(const GameTree& tree, const DensePolicy& policy,
                                         Player player) {
  return action_values_from(tree, evaluate_tree(tree, policy), policy, player,
                            ValueMode::kCounterfactual);
}

inline ValueReport q_values(const Game& game, const TabularPolicy& joint, Player player,
                            ZeroMassHandling handling = ZeroMassHandling::kError) {
  GameTree tree = build_game_tree(game);
  return q_values(tree, dense_from_tabular(tree, joint), player, handling);
}

inline ValueReport counterfactual_values(const Game& game, const TabularPolicy& joint,
                                         Player player) {
  GameTree tree = build_game_tree(game);
  return counterfactual_values(tree, dense_from_tabular(tree, joint), player);
}

}  // namespace efg
