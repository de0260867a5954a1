#pragma once

// Kuhn poker: 3-card deck {J, Q, K}, one chip ante, a single betting round
// limited to one raise of one chip. Utilities are chip deltas.

#include <string>
#include <vector>

#include "efg/core.hpp"

namespace efg {

class KuhnGame final : public Game {
 public:
  static constexpr int kNumCards = 3;
  static constexpr const char* kCardLabels[kNumCards] = {"J", "Q", "K"};

  std::string name() const override { return "kuhn"; }
  int max_depth() const override { return 5; }  // two deals + at most 3 bets

  bool is_terminal(const History& h) const override {
    return parse(h).terminal;
  }

  Player current_player(const History& h) const override {
    if (h.size() < 2) return kChancePlayer;
    const State s = parse(h);
    if (s.terminal) return kTerminalPlayer;
    return static_cast<Player>(s.betting.size() % 2);
  }

  std::vector<Action> legal_actions(const History&) const override {
    return {{0, "pass"}, {1, "bet"}};
  }

  std::vector<ChanceOutcome> chance_outcomes(const History& h) const override {
    std::vector<ChanceOutcome> out;
    if (h.empty()) {
      for (int c = 0; c < kNumCards; ++c) {
        out.push_back({{c, kCardLabels[c]}, 1.0 / 3.0});
      }
    } else {
      // Second deal: remaining cards in ascending order.
      int id = 0;
      for (int c = 0; c < kNumCards; ++c) {
        if (c == h[0]) continue;
        out.push_back({{id++, kCardLabels[c]}, 1.0 / 2.0});
      }
    }
    return out;
  }

  double utility(const History& h, Player player) const override {
    const State s = parse(h);
    if (!s.terminal) throw GameError("kuhn: utility of non-terminal history");
    const double u0 = s.u0;
    return player == 0 ? u0 : -u0;
  }

  std::string info_state_key(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.card[player] < 0) throw GameError("kuhn: no observation before the deal");
    std::string key = std::to_string(player);
    key += ':';
    key += kCardLabels[s.card[player]];
    key += ':';
    key += s.betting;
    return key;
  }

  int encoding_size() const override { return 11; }

  // player one-hot (2) + private card one-hot (3) + 3 betting slots x {pass, bet}.
  std::vector<uint8_t> encode(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.terminal) throw GameError("kuhn: encode of terminal history");
    if (s.card[player] < 0) throw GameError("kuhn: no observation before the deal");
    std::vector<uint8_t> bits(encoding_size(), 0);
    bits[player] = 1;
    bits[2 + s.card[player]] = 1;
    for (int i = 0; i < static_cast<int>(s.betting.size()); ++i) {
      bits[5 + 2 * i + (s.betting[i] == 'b' ? 1 : 0)] = 1;
    }
    return bits;
  }

 private:
  struct State {
    int card[2] = {-1, -1};
    std::string betting;  // 'p' / 'b' per move
    bool terminal = false;
    double u0 = 0.0;
  };

  State parse(const History& h) const {
    State s;
    for (size_t i = 0; i < h.size(); ++i) {
      if (i == 0) {
        s.card[0] = h[0];
      } else if (i == 1) {
        // Local id over the two remaining cards, ascending.
        int id = h[1];
        for (int c = 0; c < kNumCards; ++c) {
          if (c == s.card[0]) continue;
          if (id-- == 0) {
            s.card[1] = c;
            break;
          }
        }
      } else {
        s.betting += (h[i] == 1 ? 'b' : 'p');
      }
    }
    if (s.betting == "pp" || s.betting == "bb" || s.betting == "pbb") {
      // Showdown; each player has committed 1 + (1 if the pot was raised).
      const int stake = s.betting == "pp" ? 1 : 2;
      s.terminal = true;
      s.u0 = s.card[0] > s.card[1] ? stake : -stake;
    } else if (s.betting == "bp") {
      s.terminal = true;
      s.u0 = 1.0;  // player 1 folds their ante
    } else if (s.betting == "pbp") {
      s.terminal = true;
      s.u0 = -1.0;  // player 0 folds their ante
    }
    return s;
  }
};

}  // namespace efg
