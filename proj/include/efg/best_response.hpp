#pragma once

// Exact best response, exploitability, and NashConv. Two phases: a downward
// pass collects opponent-and-chance reach weights per history, then an upward
// pass picks, at each of the responder's information states, the action
// maximizing the reach-weighted sum of member-history continuation values.
// The same action is taken at every history of an information state, and
// every information state gets an action, including those the opponent never
// plays toward (their weights are simply all zero). Ties break toward the
// lowest action id so runs are reproducible.

#include <array>
#include <vector>

#include "efg/values.hpp"

namespace efg {

struct BestResponseDense {
  Player player = 0;
  std::vector<int> actions;  // per infostate of `player`, offset by base
  int base = 0;
  double value = 0.0;  // v_player((br, opp))

  int action(int global_infostate) const { return actions[global_infostate - base]; }
};

// `policy` is a joint dense policy; only the opponent's rows are read.
inline BestResponseDense best_response_dense(const GameTree& tree, const DensePolicy& policy,
                                             Player player) {
  BestResponseDense br;
  br.player = player;
  br.base = tree.infostate_begin[player];
  br.actions.assign(tree.num_infostates(player), -1);

  // Opponent + chance reach per node.
  const int n = static_cast<int>(tree.nodes.size());
  std::vector<double> opp_reach(n, 0.0);
  opp_reach[0] = 1.0;
  for (int node = 0; node < n; ++node) {
    const GameTree::Node& nd = tree.nodes[node];
    for (int a = 0; a < nd.num_children; ++a) {
      double w = 1.0;
      if (nd.player == kChancePlayer) {
        w = tree.child_prob[nd.child_begin + a];
      } else if (nd.player != player) {
        w = policy.probs[nd.infostate][a];
      }
      opp_reach[tree.children[nd.child_begin + a]] = opp_reach[node] * w;
    }
  }

  std::vector<double> memo(n, 0.0);
  std::vector<uint8_t> done(n, 0);

  auto value = [&](auto&& self, int node) -> double {
    if (done[node]) return memo[node];
    const GameTree::Node& nd = tree.nodes[node];
    double v = 0.0;
    if (nd.player == kTerminalPlayer) {
      v = player == 0 ? nd.utility0 : -nd.utility0;
    } else if (nd.player == player) {
      const int s = nd.infostate;
      int& choice = br.actions[s - br.base];
      if (choice < 0) {
        // Decide the whole information state at once: reach-weighted sums
        // over every member history.
        const auto& entry = tree.infostates[s];
        double best = 0.0;
        for (int a = 0; a < entry.num_actions; ++a) {
          double score = 0.0;
          for (int m : entry.members) {
            score += opp_reach[m] * self(self, tree.child(m, a));
          }
          if (choice < 0 || score > best) {
            choice = a;
            best = score;
          }
        }
      }
      v = self(self, tree.child(node, choice));
    } else {
      for (int a = 0; a < nd.num_children; ++a) {
        const double w = nd.player == kChancePlayer ? tree.child_prob[nd.child_begin + a]
                                                    : policy.probs[nd.infostate][a];
        v += w * self(self, tree.children[nd.child_begin + a]);
      }
    }
    memo[node] = v;
    done[node] = 1;
    return v;
  };
  br.value = value(value, 0);

  // States never pulled into the root value (e.g. cut off by the responder's
  // own earlier choices) still need actions; touching any member decides them.
  for (int s = br.base; s < tree.infostate_begin[player + 1]; ++s) {
    if (br.actions[s - br.base] < 0) {
      value(value, tree.infostates[s].members.front());
    }
  }
  return br;
}

inline DensePolicy pure_dense(const GameTree& tree, const BestResponseDense& br,
                              const DensePolicy& fill_from) {
  DensePolicy out = fill_from;
  for (int s = tree.infostate_begin[br.player]; s < tree.infostate_begin[br.player + 1]; ++s) {
    out.probs[s].assign(tree.infostates[s].num_actions, 0.0);
    out.probs[s][br.action(s)] = 1.0;
  }
  return out;
}

struct BestResponseResult {
  TabularPolicy policy;  // pure: probability 1 on one action per infostate
  double value = 0.0;
};

inline BestResponseResult best_response(const Game& game, const TabularPolicy& opp_policy,
                                        Player player) {
  GameTree tree = build_game_tree(game);
  DensePolicy joint = dense_from_tabular(tree, opp_policy, 1 - player);
  BestResponseDense br = best_response_dense(tree, joint, player);
  BestResponseResult result;
  result.value = br.value;
  for (int s = tree.infostate_begin[player]; s < tree.infostate_begin[player + 1]; ++s) {
    const auto& entry = tree.infostates[s];
    SimplexVector pure(entry.num_actions, 0.0);
    pure[br.action(s)] = 1.0;
    result.policy.table.emplace(InfoStateKey{player, entry.key}, std::move(pure));
  }
  return result;
}

// delta_i = max_{pi_i'} v_i(pi_i', pi_-i) - v_i(pi), per player.
inline std::array<double, 2> exploitability(const GameTree& tree, const DensePolicy& joint) {
  const std::array<double, 2> v = expected_value(tree, joint);
  const double br0 = best_response_dense(tree, joint, 0).value;
  const double br1 = best_response_dense(tree, joint, 1).value;
  return {br0 - v[0], br1 - v[1]};
}

inline double nash_conv(const GameTree& tree, const DensePolicy& joint) {
  const std::array<double, 2> delta = exploitability(tree, joint);
  return delta[0] + delta[1];
}

inline std::array<double, 2> exploitability(const Game& game, const TabularPolicy& joint) {
  GameTree tree = build_game_tree(game);
  return exploitability(tree, dense_from_tabular(tree, joint));
}

inline double nash_conv(const Game& game, const TabularPolicy& joint) {
  const std::array<double, 2> delta = exploitability(game, joint);
  return delta[0] + delta[1];
}

}  // namespace efg
