#pragma once

// Hand-built test games: a one-shot matrix game, a two-step sequential game
// whose second player can be starved of reach mass, a game that deliberately
// violates perfect recall, and wrappers that rewrite keys or action order of
// an inner game.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "efg/core.hpp"

namespace efg::testing {

// One-shot matrix game in serialized form: player 0 picks a row (hidden from
// player 1), player 1 picks a column, the game ends with u0 = m[row][col].
class MatrixGame final : public Game {
 public:
  explicit MatrixGame(std::vector<std::vector<double>> m) : m_(std::move(m)) {}

  std::string name() const override { return "matrix"; }
  int max_depth() const override { return 2; }
  bool is_terminal(const History& h) const override { return h.size() == 2; }
  Player current_player(const History& h) const override {
    return static_cast<Player>(h.size());
  }
  std::vector<Action> legal_actions(const History& h) const override {
    const size_t n = h.empty() ? m_.size() : m_[0].size();
    std::vector<Action> out;
    for (size_t i = 0; i < n; ++i) {
      out.push_back({static_cast<int>(i),
                     (h.empty() ? "r" : "c") + std::to_string(i)});
    }
    return out;
  }
  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    throw GameError("matrix: no chance nodes");
  }
  double utility(const History& h, Player player) const override {
    const double u0 = m_[h[0]][h[1]];
    return player == 0 ? u0 : -u0;
  }
  std::string info_state_key(const History&, Player player) const override {
    return std::to_string(player) + ":";
  }
  int encoding_size() const override { return 2; }
  std::vector<uint8_t> encode(const History&, Player player) const override {
    std::vector<uint8_t> bits(2, 0);
    bits[player] = 1;
    return bits;
  }

 private:
  std::vector<std::vector<double>> m_;
};

// Player 0 publicly picks L/R, player 1 answers a/b seeing the pick.
// With a player-0 policy of [1, 0], player 1's R-infostate gets zero reach.
class TwoStepGame final : public Game {
 public:
  std::string name() const override { return "two_step"; }
  int max_depth() const override { return 2; }
  bool is_terminal(const History& h) const override { return h.size() == 2; }
  Player current_player(const History& h) const override {
    return static_cast<Player>(h.size());
  }
  std::vector<Action> legal_actions(const History& h) const override {
    if (h.empty()) return {{0, "L"}, {1, "R"}};
    return {{0, "a"}, {1, "b"}};
  }
  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    throw GameError("two_step: no chance nodes");
  }
  double utility(const History& h, Player player) const override {
    static const double u0[2][2] = {{1.0, -1.0}, {2.0, -2.0}};
    return player == 0 ? u0[h[0]][h[1]] : -u0[h[0]][h[1]];
  }
  std::string info_state_key(const History& h, Player player) const override {
    std::string key = std::to_string(player) + ":";
    if (player == 1) key += h[0] == 0 ? "L" : "R";
    return key;
  }
  int encoding_size() const override { return 4; }
  std::vector<uint8_t> encode(const History& h, Player player) const override {
    std::vector<uint8_t> bits(4, 0);
    bits[player] = 1;
    if (player == 1) bits[2 + h[0]] = 1;
    return bits;
  }
};

// Player 0 moves twice; the second decision's key forgets the first move, so
// two information states with different own-action pasts are merged.
class BrokenRecallGame final : public Game {
 public:
  std::string name() const override { return "broken_recall"; }
  int max_depth() const override { return 2; }
  bool is_terminal(const History& h) const override { return h.size() == 2; }
  Player current_player(const History&) const override { return 0; }
  std::vector<Action> legal_actions(const History& h) const override {
    if (h.empty()) return {{0, "A"}, {1, "B"}};
    return {{0, "C"}, {1, "D"}};
  }
  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    throw GameError("broken_recall: no chance nodes");
  }
  double utility(const History& h, Player player) const override {
    const double u0 = h[0] == h[1] ? 1.0 : -1.0;
    return player == 0 ? u0 : -u0;
  }
  std::string info_state_key(const History& h, Player player) const override {
    if (player != 0) return "1:";
    return h.empty() ? "0:first" : "0:second";  // drops the first move
  }
  int encoding_size() const override { return 2; }
  std::vector<uint8_t> encode(const History& h, Player) const override {
    return {static_cast<uint8_t>(h.empty() ? 0 : 1), 1};
  }
};

// Forwards everything to an inner game but rewrites information state keys.
class KeyTransformGame final : public Game {
 public:
  using KeyFn = std::function<std::string(const Game&, const History&, Player)>;
  KeyTransformGame(std::shared_ptr<const Game> inner, KeyFn fn)
      : inner_(std::move(inner)), fn_(std::move(fn)) {}

  std::string name() const override { return inner_->name() + "_rekeyed"; }
  int max_depth() const override { return inner_->max_depth(); }
  bool is_terminal(const History& h) const override { return inner_->is_terminal(h); }
  Player current_player(const History& h) const override { return inner_->current_player(h); }
  std::vector<Action> legal_actions(const History& h) const override {
    return inner_->legal_actions(h);
  }
  std::vector<ChanceOutcome> chance_outcomes(const History& h) const override {
    return inner_->chance_outcomes(h);
  }
  double utility(const History& h, Player p) const override { return inner_->utility(h, p); }
  std::string info_state_key(const History& h, Player p) const override {
    return fn_(*inner_, h, p);
  }
  int encoding_size() const override { return inner_->encoding_size(); }
  std::vector<uint8_t> encode(const History& h, Player p) const override {
    return inner_->encode(h, p);
  }

 private:
  std::shared_ptr<const Game> inner_;
  KeyFn fn_;
};

// Kuhn where a player's private card is dropped from every key once betting
// has started: the player knew the card at the root and forgets it later.
inline std::shared_ptr<const Game> forgetful_kuhn(std::shared_ptr<const Game> kuhn) {
  return std::make_shared<KeyTransformGame>(
      std::move(kuhn), [](const Game& inner, const History& h, Player p) {
        std::string key = inner.info_state_key(h, p);
        // Keys look like "<player>:<card>:<betting>".
        const size_t second_colon = key.find(':', 2);
        if (second_colon + 1 < key.size()) {
          key.erase(2, second_colon - 1);  // drop the card once betting exists
        }
        return key;
      });
}

// Presents an inner game with every decision point's action order reversed.
// Histories are stored in the reversed ids; policies over this game line up
// with reversed rows of the inner game's policies.
class ReversedActionsGame final : public Game {
 public:
  explicit ReversedActionsGame(std::shared_ptr<const Game> inner) : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name() + "_reversed"; }
  int max_depth() const override { return inner_->max_depth(); }
  bool is_terminal(const History& h) const override { return inner_->is_terminal(translate(h)); }
  Player current_player(const History& h) const override {
    return inner_->current_player(translate(h));
  }
  std::vector<Action> legal_actions(const History& h) const override {
    std::vector<Action> inner_legal = inner_->legal_actions(translate(h));
    std::vector<Action> out;
    const int n = static_cast<int>(inner_legal.size());
    for (int i = 0; i < n; ++i) {
      out.push_back({i, inner_legal[n - 1 - i].label});
    }
    return out;
  }
  std::vector<ChanceOutcome> chance_outcomes(const History& h) const override {
    return inner_->chance_outcomes(translate(h));
  }
  double utility(const History& h, Player p) const override {
    return inner_->utility(translate(h), p);
  }
  std::string info_state_key(const History& h, Player p) const override {
    return inner_->info_state_key(translate(h), p);
  }
  int encoding_size() const override { return inner_->encoding_size(); }
  std::vector<uint8_t> encode(const History& h, Player p) const override {
    return inner_->encode(translate(h), p);
  }

 private:
  History translate(const History& h) const {
    History inner_h;
    for (int id : h) {
      if (inner_->current_player(inner_h) == kChancePlayer) {
        inner_h.push_back(id);  // chance order untouched
      } else {
        const int n = static_cast<int>(inner_->legal_actions(inner_h).size());
        inner_h.push_back(n - 1 - id);
      }
    }
    return inner_h;
  }

  std::shared_ptr<const Game> inner_;
};

// A single decision point with `n` actions and zero payoffs: the smallest
// legal game.
class SingleDecisionGame final : public Game {
 public:
  explicit SingleDecisionGame(int n = 2) : n_(n) {}
  std::string name() const override { return "single_decision"; }
  int max_depth() const override { return 1; }
  bool is_terminal(const History& h) const override { return !h.empty(); }
  Player current_player(const History&) const override { return 0; }
  std::vector<Action> legal_actions(const History&) const override {
    std::vector<Action> out;
    for (int i = 0; i < n_; ++i) out.push_back({i, "a" + std::to_string(i)});
    return out;
  }
  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    throw GameError("single_decision: no chance nodes");
  }
  double utility(const History&, Player) const override { return 0.0; }
  std::string info_state_key(const History&, Player player) const override {
    return std::to_string(player) + ":";
  }
  int encoding_size() const override { return 2; }
  std::vector<uint8_t> encode(const History&, Player player) const override {
    std::vector<uint8_t> bits(2, 0);
    bits[player] = 1;
    return bits;
  }

 private:
  int n_;
};

}  // namespace efg::testing
