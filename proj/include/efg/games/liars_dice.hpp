#pragma once

// Liar's Dice(1,1): each player rolls a single private six-sided die, then
// players alternate strictly increasing bids q-f (quantity, face) over the
// fixed order 1-1 < 1-2 < ... < 1-6 < 2-1 < ... < 2-6, or call "liar".
// Face 6 is wild: a bid q-f with f != 6 is satisfied iff
// count(f) + count(6) >= q; a bid q-6 iff count(6) >= q. If the last bid is
// not satisfied the caller wins, otherwise the caller loses. Payoffs +/-1.

#include <string>
#include <vector>

#include "efg/core.hpp"

namespace efg {

class LiarsDiceGame final : public Game {
 public:
  static constexpr int kFaces = 6;
  static constexpr int kNumBids = 12;  // q in {1,2} x f in {1..6}

  static std::string bid_label(int bid) {
    return std::to_string(1 + bid / kFaces) + "-" + std::to_string(1 + bid % kFaces);
  }

  std::string name() const override { return "liars_dice_11"; }
  int max_depth() const override { return 2 + kNumBids + 1; }

  bool is_terminal(const History& h) const override {
    return !h.empty() && parse(h).liar_called;
  }

  Player current_player(const History& h) const override {
    const State s = parse(h);
    if (s.liar_called) return kTerminalPlayer;
    if (h.size() < 2) return kChancePlayer;
    return static_cast<Player>(s.bids.size() % 2);
  }

  std::vector<Action> legal_actions(const History& h) const override {
    const State s = parse(h);
    const int last = s.bids.empty() ? -1 : s.bids.back();
    std::vector<Action> out;
    int id = 0;
    for (int b = last + 1; b < kNumBids; ++b) {
      out.push_back({id++, bid_label(b)});
    }
    if (last >= 0) out.push_back({id++, "liar"});
    return out;
  }

  std::vector<ChanceOutcome> chance_outcomes(const History&) const override {
    std::vector<ChanceOutcome> out;
    for (int f = 0; f < kFaces; ++f) {
      out.push_back({{f, std::to_string(f + 1)}, 1.0 / kFaces});
    }
    return out;
  }

  double utility(const History& h, Player player) const override {
    const State s = parse(h);
    if (!s.liar_called) throw GameError("liars_dice: utility of non-terminal history");
    const Player caller = static_cast<Player>(s.bids.size() % 2);
    const int last = s.bids.back();
    const int q = 1 + last / kFaces;
    const int f = 1 + last % kFaces;
    int count = 0;
    for (int die : s.die) {
      if (die == f || die == kFaces) ++count;  // face 6 is wild
    }
    if (f == kFaces) {
      count = (s.die[0] == kFaces) + (s.die[1] == kFaces);
    }
    const Player winner = count >= q ? 1 - caller : caller;
    return player == winner ? 1.0 : -1.0;
  }

  std::string info_state_key(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.die[player] < 0) throw GameError("liars_dice: no observation before the roll");
    std::string key = std::to_string(player);
    key += ':';
    key += std::to_string(s.die[player]);
    key += ':';
    for (size_t i = 0; i < s.bids.size(); ++i) {
      if (i > 0) key += ',';
      key += bid_label(s.bids[i]);
    }
    return key;
  }

  int encoding_size() const override { return 20; }

  // player one-hot (2) + private die one-hot (6) + one bit per bid made (12).
  // Bids are strictly increasing, so the set of bids determines the sequence.
  std::vector<uint8_t> encode(const History& h, Player player) const override {
    const State s = parse(h);
    if (s.liar_called) throw GameError("liars_dice: encode of terminal history");
    if (s.die[player] < 0) throw GameError("liars_dice: no observation before the roll");
    std::vector<uint8_t> bits(encoding_size(), 0);
    bits[player] = 1;
    bits[2 + s.die[player] - 1] = 1;
    for (int b : s.bids) bits[8 + b] = 1;
    return bits;
  }

 private:
  struct State {
    int die[2] = {-1, -1};  // face values 1..6
    std::vector<int> bids;  // global bid indices, strictly increasing
    bool liar_called = false;
  };

  State parse(const History& h) const {
    State s;
    for (size_t i = 0; i < h.size(); ++i) {
      if (i < 2) {
        s.die[i] = h[i] + 1;
        continue;
      }
      if (s.liar_called) throw GameError("liars_dice: action after terminal history");
      const int last = s.bids.empty() ? -1 : s.bids.back();
      const int global = last + 1 + h[i];
      if (last >= 0 && global == kNumBids) {
        s.liar_called = true;
      } else if (global < kNumBids) {
        s.bids.push_back(global);
      } else {
        throw GameError("liars_dice: action id out of range");
      }
    }
    return s;
  }
};

}  // namespace efg
