#pragma once

// Goofspiel(4), imperfect-information variant: a fixed point deck revealed in
// decreasing order (4, 3, 2, 1). Each round player 0 secretly plays one of
// their remaining bid cards {1..4}, then player 1 plays one of theirs without
// observing it. The higher bid takes the point card; equal bids discard it.
// Players are only told whether they won, lost, or tied the bid. The terminal
// utility is sign(points_0 - points_1).

#include <string>
#include <vector>

#include "efg/core.hpp"

namespace efg {

class GoofspielGame final : public Game {
 public:
  static constexpr int kCards = 4;

  std::string name() const override { return "goofspiel_4"; }
  int max_depth() const override { return 2 * kCards; }

  bool is_terminal(const History& h) const override {
    return static_cast<int>(h.size()) == 2 * kCards;
  }

  Player current_player(const History& h) const override {
    if (is_terminal(h)) return kTerminalPlayer;
    return static_cast<Player>(h.size() % 2);
  }

  std::vector<Action> legal_actions(const History& h) const override {
    const State s = parse(h);
    const Player p = static_cast<Player>(h.size() % 2);
    std::vector<Action> out;
    int id = 0;
    for (int c = 1; c <= kCards; ++c) {
      if (s.held[p][c - 1]) out.push_back({id++, std::to_string(c)});
    }
    return out;
  }

  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    throw GameError("goofspiel: no chance nodes");
  }

  double utility(const History& h, Player player) const override {
    const State s = parse(h);
    if (static_cast<int>(h.size()) != 2 * kCards) {
      throw GameError("goofspiel: utility of non-terminal history");
    }
    const int diff = s.points[0] - s.points[1];
    const double u0 = diff > 0 ? 1.0 : diff < 0 ? -1.0 : 0.0;
    return player == 0 ? u0 : -u0;
  }

  std::string info_state_key(const History& h, Player player) const override {
    const State s = parse(h);
    std::string key = std::to_string(player);
    key += ':';
    for (size_t i = 0; i < s.bids[player].size(); ++i) {
      if (i > 0) key += ',';
      key += std::to_string(s.bids[player][i]);
    }
    key += ':';
    key += player == 0 ? s.outcomes : flipped(s.outcomes);
    return key;
  }

  int encoding_size() const override { return 30; }

  // player one-hot (2) + per round: own bid one-hot (4 x 4)
  // + per round: outcome one-hot {win, lose, tie} (4 x 3).
  std::vector<uint8_t> encode(const History& h, Player player) const override {
    if (is_terminal(h)) throw GameError("goofspiel: encode of terminal history");
    const State s = parse(h);
    std::vector<uint8_t> bits(encoding_size(), 0);
    bits[player] = 1;
    const std::string view = player == 0 ? s.outcomes : flipped(s.outcomes);
    for (size_t r = 0; r < s.bids[player].size(); ++r) {
      bits[2 + 4 * r + (s.bids[player][r] - 1)] = 1;
    }
    for (size_t r = 0; r < view.size(); ++r) {
      const int o = view[r] == 'W' ? 0 : view[r] == 'L' ? 1 : 2;
      bits[18 + 3 * r + o] = 1;
    }
    return bits;
  }

 private:
  struct State {
    bool held[2][kCards] = {{true, true, true, true}, {true, true, true, true}};
    std::vector<int> bids[2];  // card values in round order
    std::string outcomes;      // player 0's view: 'W' / 'L' / 'T' per round
    int points[2] = {0, 0};
  };

  // Player 1 sees the same rounds with wins and losses exchanged.
  static std::string flipped(const std::string& outcomes) {
    std::string out = outcomes;
    for (char& c : out) {
      if (c == 'W') c = 'L';
      else if (c == 'L') c = 'W';
    }
    return out;
  }

  State parse(const History& h) const {
    State s;
    int pending = 0;  // player 0's bid, waiting on player 1
    for (size_t i = 0; i < h.size(); ++i) {
      const Player p = static_cast<Player>(i % 2);
      int id = h[i];
      int card = 0;
      for (int c = 1; c <= kCards; ++c) {
        if (s.held[p][c - 1] && id-- == 0) {
          card = c;
          break;
        }
      }
      if (card == 0) throw GameError("goofspiel: action id out of range");
      s.held[p][card - 1] = false;
      s.bids[p].push_back(card);
      if (p == 0) {
        pending = card;
      } else {
        const int round = static_cast<int>(i / 2);
        const int prize = kCards - round;  // fixed deck in decreasing order
        if (pending > card) {
          s.points[0] += prize;
          s.outcomes += 'W';
        } else if (card > pending) {
          s.points[1] += prize;
          s.outcomes += 'L';
        } else {
          s.outcomes += 'T';  // tied bids discard the point card
        }
      }
    }
    return s;
  }
};

}  // namespace efg
