#pragma once

// Leduc poker: 6-card deck (3 ranks x 2 suits), one chip ante, two betting
// rounds with fixed bet sizes of 2 then 4 chips and at most two wagering
// escalations per round (a bet plus one raise). A single public card is
// revealed between rounds; a pair beats high card, suit is irrelevant.

#include <string>
#include <vector>

#include "efg/core.hpp"

namespace efg {

class LeducGame final : public Game {
 public:
  static constexpr int kNumCards = 6;  // rank * 2 + suit
  static constexpr int kMaxRaises = 2;

  static std::string card_label(int card) {
    static constexpr char kRank[3] = {'J', 'Q', 'K'};
    static constexpr char kSuit[2] = {'s', 'h'};
    return std::string{kRank[card / 2], kSuit[card % 2]};
  }

  std::string name() const override { return "leduc"; }
  int max_depth() const override { return 11; }  // 3 chance moves + 2 rounds of <= 4

  bool is_terminal(const History& h) const override { return parse(h).terminal; }

  Player current_player(const History& h) const override {
    const State s = parse(h);
    if (s.terminal) return kTerminalPlayer;
    if (s.stage == Stage::kDeal0 || s.stage == Stage::kDeal1 || s.stage == Stage::kReveal) {
      return kChancePlayer;
    }
    return s.to_act;
  }

  std::vector<Action> legal_actions(const History& h) const override {
    const State s = parse(h);
    std::vector<Action> out;
    int id = 0;
    if (s.facing_bet) out.push_back({id++, "fold"});
    out.push_back({id++, "call"});
    if (s.raises < kMaxRaises) out.push_back({id++, "raise"});
    return out;
  }

  std::vector<ChanceOutcome> chance_outcomes(const History& h) const override {
    const State s = parse(h);
    std::vector<ChanceOutcome> out;
    int id = 0;
    for (int c = 0; c < kNumCards; ++c) {
      if (c == s.card[0] || c == s.card[1]) continue;
      out.push_back({{id++, card_label(c)}, 0.0});
    }
    for (ChanceOutcome& o : out) o.prob = 1.0 / static_cast<double>(out.size());
    return out;
  }

  double utility(const History& h, Player player) const override {
    const State s = parse(h);
    if (!s.terminal) throw GameError("leduc: utility of non-terminal history");
    return player == 0 ? s.u0 : -s.u0;
  }

  std::string info_state_key(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.card[player] < 0) throw GameError("leduc: no observation before the deal");
    std::string key = std::to_string(player);
    key += ':';
    key += card_label(s.card[player]);
    key += ':';
    key += s.round_moves[0];
    if (s.public_card >= 0) {
      key += ':';
      key += card_label(s.public_card);
      key += ':';
      key += s.round_moves[1];
    }
    return key;
  }

  int encoding_size() const override { return 38; }

  // player one-hot (2) + private card one-hot (6) + public card one-hot (6)
  // + 2 rounds x 4 move slots x {fold, call, raise}.
  std::vector<uint8_t> encode(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.terminal) throw GameError("leduc: encode of terminal history");
    if (s.card[player] < 0) throw GameError("leduc: no observation before the deal");
    std::vector<uint8_t> bits(encoding_size(), 0);
    bits[player] = 1;
    bits[2 + s.card[player]] = 1;
    if (s.public_card >= 0) bits[8 + s.public_card] = 1;
    for (int r = 0; r < 2; ++r) {
      const std::string& moves = s.round_moves[r];
      for (int i = 0; i < static_cast<int>(moves.size()); ++i) {
        int m = moves[i] == 'f' ? 0 : moves[i] == 'c' ? 1 : 2;
        bits[14 + 12 * r + 3 * i + m] = 1;
      }
    }
    return bits;
  }

 private:
  enum class Stage { kDeal0, kDeal1, kRound1, kReveal, kRound2, kDone };

  struct State {
    Stage stage = Stage::kDeal0;
    int card[2] = {-1, -1};
    int public_card = -1;
    std::string round_moves[2];  // 'f' / 'c' / 'r' per move
    int round = 0;               // 0 or 1
    int raises = 0;
    bool facing_bet = false;
    bool checked_once = false;  // opener checked, waiting on the closer
    Player to_act = 0;
    int contrib[2] = {1, 1};  // antes
    bool terminal = false;
    double u0 = 0.0;
  };

  // Maps a local action id back to the move it denotes under the legal-set
  // ordering [fold?, call, raise?].
  static char decode_move(const State& s, int id) {
    if (s.facing_bet) {
      if (id == 0) return 'f';
      if (id == 1) return 'c';
      return 'r';
    }
    return id == 0 ? 'c' : 'r';
  }

  State parse(const History& h) const {
    State s;
    for (int raw : h) {
      switch (s.stage) {
        case Stage::kDeal0:
          s.card[0] = raw;
          s.stage = Stage::kDeal1;
          break;
        case Stage::kDeal1:
          s.card[1] = nth_remaining(s, raw);
          s.stage = Stage::kRound1;
          break;
        case Stage::kReveal:
          s.public_card = nth_remaining(s, raw);
          s.stage = Stage::kRound2;
          s.round = 1;
          s.raises = 0;
          s.facing_bet = false;
          s.checked_once = false;
          s.to_act = 0;
          break;
        case Stage::kRound1:
        case Stage::kRound2:
          apply_move(s, decode_move(s, raw));
          break;
        case Stage::kDone:
          throw GameError("leduc: action after terminal history");
      }
    }
    return s;
  }

  int nth_remaining(const State& s, int id) const {
    for (int c = 0; c < kNumCards; ++c) {
      if (c == s.card[0] || c == s.card[1]) continue;
      if (id-- == 0) return c;
    }
    throw GameError("leduc: chance outcome id out of range");
  }

  void apply_move(State& s, char move) const {
    const int bet_size = s.round == 0 ? 2 : 4;
    s.round_moves[s.round] += move;
    if (move == 'f') {
      const Player folder = s.to_act;
      s.terminal = true;
      s.stage = Stage::kDone;
      s.u0 = folder == 0 ? -s.contrib[0] : s.contrib[1];
      return;
    }
    if (move == 'c') {
      if (s.facing_bet) {
        s.contrib[s.to_act] = s.contrib[1 - s.to_act];
        end_round(s);
      } else if (s.checked_once) {
        end_round(s);
      } else {
        s.checked_once = true;
        s.to_act = 1 - s.to_act;
      }
      return;
    }
    // raise: match any outstanding bet, then add the round's bet size
    s.contrib[s.to_act] = s.contrib[1 - s.to_act] + bet_size;
    s.raises += 1;
    s.facing_bet = true;
    s.to_act = 1 - s.to_act;
  }

  void end_round(State& s) const {
    if (s.round == 0) {
      s.stage = Stage::kReveal;
    } else {
      s.terminal = true;
      s.stage = Stage::kDone;
      s.u0 = showdown_sign(s) * s.contrib[1];  // contributions are equal here
    }
  }

  // +1 player 0 wins, -1 player 1 wins, 0 split.
  static int showdown_sign(const State& s) {
    const int r0 = s.card[0] / 2;
    const int r1 = s.card[1] / 2;
    const int rp = s.public_card / 2;
    const bool pair0 = r0 == rp;
    const bool pair1 = r1 == rp;
    if (pair0 != pair1) return pair0 ? 1 : -1;
    if (r0 != r1) return r0 > r1 ? 1 : -1;
    return 0;
  }
};

}  // namespace efg
