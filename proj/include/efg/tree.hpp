#pragma once

// Compiled index of a finite game: every history flattened into an array of
// nodes in depth-first preorder, with information states collected, sorted
// lexicographically by (player, key), and cross-linked. Solvers and
// evaluators run on this index; the Game interface itself stays stateless.

#include <array>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "efg/core.hpp"
#include "efg/policy.hpp"

namespace efg {

struct GameTree {
  struct Node {
    int parent = -1;
    int action_from_parent = -1;
    Player player = kTerminalPlayer;  // kChancePlayer, 0, 1, or kTerminalPlayer
    int child_begin = 0;              // index into children / child_prob
    int num_children = 0;
    int infostate = -1;               // decision nodes only
    double utility0 = 0.0;            // terminal nodes only
  };

  struct InfoStateEntry {
    Player player = 0;
    std::string key;
    int num_actions = 0;
    std::vector<int> members;  // node ids in DFS order
    // The player's previous decision point on the path (well-defined under
    // perfect recall), as (infostate index, action id); -1 at the player's
    // first decisions.
    int own_parent = -1;
    int own_parent_action = -1;
    int own_depth = 0;
    std::vector<uint8_t> encoding;
  };

  std::shared_ptr<const Game> game;
  std::vector<Node> nodes;  // preorder; node 0 is the root
  std::vector<int> children;
  std::vector<double> child_prob;  // chance edges; 1.0 on player edges
  std::vector<InfoStateEntry> infostates;
  std::array<int, 3> infostate_begin{0, 0, 0};  // player p owns [begin[p], begin[p+1])

  int child(int node, int action) const { return children[nodes[node].child_begin + action]; }

  int num_infostates() const { return static_cast<int>(infostates.size()); }
  int num_infostates(Player p) const { return infostate_begin[p + 1] - infostate_begin[p]; }

  int infostate_index(const InfoStateKey& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
  }

  History history_of(int node) const {
    History h;
    for (int n = node; n > 0; n = nodes[n].parent) h.push_back(nodes[n].action_from_parent);
    std::reverse(h.begin(), h.end());
    return h;
  }

  std::map<InfoStateKey, int> index_;  // (player, key) -> infostate index
};

inline GameTree build_game_tree(std::shared_ptr<const Game> game) {
  GameTree tree;
  tree.game = game;
  const Game& g = *game;

  struct TempInfo {
    int num_actions = 0;
    std::vector<int> members;
    int own_parent_node = -1;
    int own_parent_action = -1;
  };
  std::array<std::map<std::string, TempInfo>, 2> temp;
  std::vector<std::vector<int>> node_children;
  std::vector<std::vector<double>> node_probs;

  struct OwnEdge {
    int node = -1;
    int action = -1;
  };

  auto walk = [&](auto&& self, const History& h, int parent, int action_from_parent,
                  std::array<OwnEdge, 2> last_own) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    node_children.emplace_back();
    node_probs.emplace_back();
    GameTree::Node& placed = tree.nodes[id];
    placed.parent = parent;
    placed.action_from_parent = action_from_parent;

    if (g.is_terminal(h)) {
      tree.nodes[id].player = kTerminalPlayer;
      tree.nodes[id].utility0 = g.utility(h, 0);
      return id;
    }
    const Player p = g.current_player(h);
    tree.nodes[id].player = p;
    if (p == kChancePlayer) {
      for (const ChanceOutcome& c : g.chance_outcomes(h)) {
        const int kid = self(self, g.apply(h, c.action.id), id, c.action.id, last_own);
        node_children[id].push_back(kid);
        node_probs[id].push_back(c.prob);
      }
      return id;
    }
    std::vector<Action> legal = g.legal_actions(h);
    TempInfo& info = temp[p][g.info_state_key(h, p)];
    if (info.members.empty()) {
      info.num_actions = static_cast<int>(legal.size());
      info.own_parent_node = last_own[p].node;
      info.own_parent_action = last_own[p].action;
    }
    info.members.push_back(id);
    for (const Action& a : legal) {
      std::array<OwnEdge, 2> next = last_own;
      next[p] = {id, a.id};
      const int kid = self(self, g.apply(h, a.id), id, a.id, next);
      node_children[id].push_back(kid);
      node_probs[id].push_back(1.0);
    }
    return id;
  };
  walk(walk, g.initial_history(), -1, -1, {});

  // Flatten child arrays.
  for (size_t n = 0; n < tree.nodes.size(); ++n) {
    tree.nodes[n].child_begin = static_cast<int>(tree.children.size());
    tree.nodes[n].num_children = static_cast<int>(node_children[n].size());
    tree.children.insert(tree.children.end(), node_children[n].begin(), node_children[n].end());
    tree.child_prob.insert(tree.child_prob.end(), node_probs[n].begin(), node_probs[n].end());
  }

  // Infostates, sorted by (player, key); std::map iteration gives key order.
  tree.infostate_begin[0] = 0;
  for (Player p = 0; p < 2; ++p) {
    for (auto& [key, info] : temp[p]) {
      GameTree::InfoStateEntry entry;
      entry.player = p;
      entry.key = key;
      entry.num_actions = info.num_actions;
      entry.members = std::move(info.members);
      entry.own_parent = info.own_parent_node;  // still a node id, resolved below
      entry.own_parent_action = info.own_parent_action;
      const int idx = static_cast<int>(tree.infostates.size());
      tree.infostates.push_back(std::move(entry));
      tree.index_[{p, key}] = idx;
      for (int m : tree.infostates[idx].members) tree.nodes[m].infostate = idx;
    }
    tree.infostate_begin[p + 1] = static_cast<int>(tree.infostates.size());
  }
  // Resolve own-parent node ids to infostate indices and compute own depths.
  for (auto& entry : tree.infostates) {
    if (entry.own_parent >= 0) entry.own_parent = tree.nodes[entry.own_parent].infostate;
  }
  auto own_depth = [&](auto&& self, int s) -> int {
    GameTree::InfoStateEntry& e = tree.infostates[s];
    if (e.own_parent < 0) return 0;
    if (e.own_depth == 0) e.own_depth = self(self, e.own_parent) + 1;
    return e.own_depth;
  };
  for (int s = 0; s < tree.num_infostates(); ++s) own_depth(own_depth, s);

  // State encodings, one per infostate.
  for (auto& entry : tree.infostates) {
    entry.encoding = g.encode(tree.history_of(entry.members.front()), entry.player);
  }
  return tree;
}

// Non-owning convenience for callers holding a plain reference. The tree must
// not outlive the game.
inline GameTree build_game_tree(const Game& game) {
  return build_game_tree(std::shared_ptr<const Game>(&game, [](const Game*) {}));
}

// ---------------------------------------------------------------------------
// Dense policies: probability vectors indexed by the tree's infostate order.

struct DensePolicy {
  std::vector<std::vector<double>> probs;
};

inline DensePolicy uniform_dense(const GameTree& tree) {
  DensePolicy out;
  out.probs.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    const int n = tree.infostates[s].num_actions;
    out.probs[s].assign(n, 1.0 / static_cast<double>(n));
  }
  return out;
}

// Fills the rows of `player` (-1 for both) from a tabular policy. Rows of the
// other player are left empty unless `into` is supplied.
inline DensePolicy dense_from_tabular(const GameTree& tree, const TabularPolicy& tabular,
                                      int player = -1, const DensePolicy* into = nullptr) {
  DensePolicy out = into ? *into : DensePolicy{};
  out.probs.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    const auto& entry = tree.infostates[s];
    if (player >= 0 && entry.player != player) continue;
    const SimplexVector& probs = tabular.at({entry.player, entry.key});
    if (static_cast<int>(probs.size()) != entry.num_actions) {
      throw GameError("policy row length mismatch at '" + entry.key + "'");
    }
    out.probs[s] = probs;
  }
  return out;
}

inline TabularPolicy tabular_from_dense(const GameTree& tree, const DensePolicy& dense,
                                        int player = -1) {
  TabularPolicy out;
  for (int s = 0; s < tree.num_infostates(); ++s) {
    const auto& entry = tree.infostates[s];
    if (player >= 0 && entry.player != player) continue;
    out.table.emplace(InfoStateKey{entry.player, entry.key}, dense.probs[s]);
  }
  return out;
}

// Realization probability of each of `player`'s infostates under that
// player's own policy alone (the eta_i(s) chain through own decisions).
inline std::vector<double> own_reaches(const GameTree& tree, const DensePolicy& policy,
                                       Player player) {
  std::vector<double> reach(tree.num_infostates(), -1.0);
  auto compute = [&](auto&& self, int s) -> double {
    if (reach[s] >= 0.0) return reach[s];
    const auto& e = tree.infostates[s];
    reach[s] = e.own_parent < 0
                   ? 1.0
                   : self(self, e.own_parent) * policy.probs[e.own_parent][e.own_parent_action];
    return reach[s];
  };
  for (int s = tree.infostate_begin[player]; s < tree.infostate_begin[player + 1]; ++s) {
    compute(compute, s);
  }
  return reach;
}

}  // namespace efg
