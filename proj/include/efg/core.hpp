#pragma once

// Extensive-form game abstraction: ground histories, player and chance turns,
// information states with perfect recall, and the generic traversal utilities
// everything else builds on.
//
// A history is the ordered sequence of action ids taken from the empty
// history; game state is recomputed from the sequence on demand. Action ids
// are local: id k is the k-th entry of the decision point's ordered legal set.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace efg {

using Player = int;

inline constexpr Player kChancePlayer = -1;
inline constexpr Player kTerminalPlayer = -2;
inline constexpr int kNumPlayers = 2;

struct GameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An action at a specific decision point. `id` indexes the decision point's
// ordered legal set (dense 0..|A|-1); `label` is the human-readable move.
struct Action {
  int id = 0;
  std::string label;

  friend bool operator==(const Action& a, const Action& b) {
    return a.id == b.id && a.label == b.label;
  }
};

using History = std::vector<int>;

// h ⊑ h': sequence prefix test.
inline bool is_prefix(const History& h, const History& hp) {
  if (h.size() > hp.size()) return false;
  return std::equal(h.begin(), h.end(), hp.begin());
}

// Identifies one information state: the acting player plus a byte string
// uniquely encoding that player's observation sequence. Keys are stable
// across runs and double as serialization identifiers.
struct InfoStateKey {
  Player player = 0;
  std::string key;

  friend auto operator<=>(const InfoStateKey&, const InfoStateKey&) = default;
};

struct ChanceOutcome {
  Action action;
  double prob = 0.0;
};

// Interface contract for a finite two-player zero-sum extensive-form game.
// Implementations must be immutable after construction; every method is a
// pure function of the history argument, so instances are freely shared
// across threads.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;

  History initial_history() const { return {}; }

  virtual bool is_terminal(const History& h) const = 0;

  // Player to act at a non-terminal history (may be kChancePlayer).
  virtual Player current_player(const History& h) const = 0;

  // Ordered legal set at a non-terminal, non-chance history.
  virtual std::vector<Action> legal_actions(const History& h) const = 0;

  // Outcomes at a chance history; probabilities are nonnegative and sum to 1.
  virtual std::vector<ChanceOutcome> chance_outcomes(const History& h) const = 0;

  // Child history. `action_id` must be a legal id at h.
  History apply(const History& h, int action_id) const {
    History child = h;
    child.push_back(action_id);
    return child;
  }

  // Terminal utility for `player`. All four benchmark games pay integers.
  virtual double utility(const History& h, Player player) const = 0;

  // Observation-sequence key for `player` at a history where that player is
  // to act. Keys are prefixed with the player index, so byte strings never
  // collide across players.
  virtual std::string info_state_key(const History& h, Player player) const = 0;

  virtual int max_depth() const = 0;

  // Fixed per-game bit count of the state encoding.
  virtual int encoding_size() const = 0;

  // Binary state encoding for the acting player: equal across all histories
  // of one information state, distinct across information states.
  virtual std::vector<uint8_t> encode(const History& h, Player player) const = 0;
};

// All histories reachable from the initial history, depth-first preorder.
// Chance branches follow chance_outcomes order, decisions legal_actions
// order. Depth beyond max_depth() signals a malformed game.
inline std::vector<History> enumerate_histories(const Game& game) {
  std::vector<History> out;
  const int depth_limit = game.max_depth();

  auto walk = [&](auto&& self, const History& h) -> void {
    if (static_cast<int>(h.size()) > depth_limit) {
      throw GameError(game.name() + ": history depth exceeds max_depth, malformed game");
    }
    out.push_back(h);
    if (game.is_terminal(h)) return;
    if (game.current_player(h) == kChancePlayer) {
      for (const ChanceOutcome& c : game.chance_outcomes(h)) {
        self(self, game.apply(h, c.action.id));
      }
    } else {
      for (const Action& a : game.legal_actions(h)) {
        self(self, game.apply(h, a.id));
      }
    }
  };
  walk(walk, game.initial_history());
  return out;
}

// Every information state of `player`, with the attached legal set, ordered
// lexicographically by key. Each key appears exactly once.
inline std::vector<std::pair<InfoStateKey, std::vector<Action>>> enumerate_infostates(
    const Game& game, Player player) {
  if (player != 0 && player != 1) {
    throw GameError("enumerate_infostates: player must be 0 or 1");
  }
  std::map<std::string, std::vector<Action>> seen;
  for (const History& h : enumerate_histories(game)) {
    if (game.is_terminal(h)) continue;
    if (game.current_player(h) != player) continue;
    std::string key = game.info_state_key(h, player);
    if (!seen.count(key)) seen.emplace(std::move(key), game.legal_actions(h));
  }
  std::vector<std::pair<InfoStateKey, std::vector<Action>>> out;
  out.reserve(seen.size());
  for (auto& [key, actions] : seen) {
    out.push_back({InfoStateKey{player, key}, std::move(actions)});
  }
  return out;
}

struct PerfectRecallResult {
  bool ok = true;
  // Offending pair of histories when !ok: both map to the same key although
  // the owning player's prior (infostate, action) sequences differ.
  History first;
  History second;
  std::string message;
};

// Passes iff for every information state, all member histories share the same
// sequence of the owning player's prior (infostate key, action) pairs.
inline PerfectRecallResult validate_perfect_recall(const Game& game) {
  using OwnSeq = std::vector<std::pair<std::string, int>>;
  struct Entry {
    OwnSeq seq;
    History exemplar;
  };
  std::map<std::string, Entry> canon;  // infostate key -> first-seen own past
  PerfectRecallResult result;

  // Own sequences are threaded down the walk, one per player.
  auto walk = [&](auto&& self, const History& h, std::array<OwnSeq, 2> seqs) -> bool {
    if (game.is_terminal(h)) return true;
    const Player p = game.current_player(h);
    if (p == kChancePlayer) {
      for (const ChanceOutcome& c : game.chance_outcomes(h)) {
        if (!self(self, game.apply(h, c.action.id), seqs)) return false;
      }
      return true;
    }
    std::string key = game.info_state_key(h, p);
    auto it = canon.find(key);
    if (it == canon.end()) {
      canon.emplace(key, Entry{seqs[p], h});
    } else if (it->second.seq != seqs[p]) {
      result.ok = false;
      result.first = it->second.exemplar;
      result.second = h;
      result.message = "information state '" + key +
                       "' groups histories with different own-action pasts";
      return false;
    }
    for (const Action& a : game.legal_actions(h)) {
      std::array<OwnSeq, 2> next = seqs;
      next[p].push_back({key, a.id});
      if (!self(self, game.apply(h, a.id), next)) return false;
    }
    return true;
  };
  walk(walk, game.initial_history(), {});
  return result;
}

// Structural validation: chance probabilities, exact zero-sum terminals,
// identical legal sets within each information state, perfect recall.
inline void validate_game(const Game& game) {
  std::map<std::string, std::vector<Action>> legal_by_key;
  for (const History& h : enumerate_histories(game)) {
    if (game.is_terminal(h)) {
      const double u0 = game.utility(h, 0);
      const double u1 = game.utility(h, 1);
      if (u0 + u1 != 0.0) {
        throw GameError(game.name() + ": terminal is not zero-sum");
      }
      continue;
    }
    const Player p = game.current_player(h);
    if (p == kChancePlayer) {
      double mass = 0.0;
      for (const ChanceOutcome& c : game.chance_outcomes(h)) {
        if (c.prob < 0.0) throw GameError(game.name() + ": negative chance probability");
        mass += c.prob;
      }
      if (std::abs(mass - 1.0) > 1e-12) {
        throw GameError(game.name() + ": chance probabilities do not sum to 1");
      }
      continue;
    }
    std::vector<Action> legal = game.legal_actions(h);
    if (legal.empty()) throw GameError(game.name() + ": decision node with no legal actions");
    for (int i = 0; i < static_cast<int>(legal.size()); ++i) {
      if (legal[i].id != i) throw GameError(game.name() + ": action ids not dense 0..|A|-1");
    }
    std::string key = game.info_state_key(h, p);
    auto [it, inserted] = legal_by_key.try_emplace(std::move(key), legal);
    if (!inserted && !(it->second == legal)) {
      throw GameError(game.name() + ": legal sets differ within an information state");
    }
  }
  PerfectRecallResult pr = validate_perfect_recall(game);
  if (!pr.ok) throw GameError(game.name() + ": " + pr.message);
}

}  // namespace efg
