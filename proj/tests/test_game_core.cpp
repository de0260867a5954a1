#include <set>

#include "catch_amalgamated.hpp"
#include "efg/core.hpp"
#include "efg/games.hpp"
#include "efg/tree.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace efg;

TEST_CASE("history enumeration counts") {
  SECTION("single decision with two actions: root plus two terminals") {
    testing::SingleDecisionGame game(2);
    REQUIRE(enumerate_histories(game).size() == 3);
  }
  SECTION("kuhn has 58 histories") {
    // 1 root + 3 first deals + 6 full deals + 6 deals x 9 betting nodes.
    REQUIRE(enumerate_histories(*build_game("kuhn")).size() == 58);
  }
  SECTION("goofspiel count matches an independently coded counter") {
    const auto histories = enumerate_histories(*build_game("goofspiel_4"));
    REQUIRE(static_cast<long long>(histories.size()) == testing::goofspiel_history_count(4));
  }
}

TEST_CASE("history enumeration is deterministic depth-first preorder") {
  const auto game = build_game("kuhn");
  const auto histories = enumerate_histories(*game);
  REQUIRE(histories.front().empty());
  // Every history appears exactly once.
  std::set<History> unique(histories.begin(), histories.end());
  REQUIRE(unique.size() == histories.size());
  // Preorder: each history is preceded by its parent somewhere earlier, and
  // the immediate next entry after a non-terminal is its first child.
  for (size_t i = 0; i + 1 < histories.size(); ++i) {
    if (!game->is_terminal(histories[i])) {
      REQUIRE(is_prefix(histories[i], histories[i + 1]));
      REQUIRE(histories[i + 1].size() == histories[i].size() + 1);
    }
  }
  // Two runs agree.
  REQUIRE(enumerate_histories(*game) == histories);
}

TEST_CASE("depth overflow signals a malformed game") {
  // A game whose max_depth lies: reuse Kuhn but report depth 1.
  class LyingDepth final : public Game {
   public:
    LyingDepth() : inner_() {}
    std::string name() const override { return "lying"; }
    int max_depth() const override { return 1; }
    bool is_terminal(const History& h) const override { return inner_.is_terminal(h); }
    Player current_player(const History& h) const override { return inner_.current_player(h); }
    std::vector<Action> legal_actions(const History& h) const override {
      return inner_.legal_actions(h);
    }
    std::vector<ChanceOutcome> chance_outcomes(const History& h) const override {
      return inner_.chance_outcomes(h);
    }
    double utility(const History& h, Player p) const override { return inner_.utility(h, p); }
    std::string info_state_key(const History& h, Player p) const override {
      return inner_.info_state_key(h, p);
    }
    int encoding_size() const override { return inner_.encoding_size(); }
    std::vector<uint8_t> encode(const History& h, Player p) const override {
      return inner_.encode(h, p);
    }

   private:
    KuhnGame inner_;
  };
  REQUIRE_THROWS_AS(enumerate_histories(LyingDepth()), GameError);
}

TEST_CASE("infostate enumeration") {
  SECTION("kuhn: six infostates per player, sorted by key, each key once") {
    const auto game = build_game("kuhn");
    for (Player p = 0; p < 2; ++p) {
      const auto infostates = enumerate_infostates(*game, p);
      REQUIRE(infostates.size() == 6);
      std::set<std::string> keys;
      for (size_t i = 0; i < infostates.size(); ++i) {
        keys.insert(infostates[i].first.key);
        if (i > 0) REQUIRE(infostates[i - 1].first.key < infostates[i].first.key);
        REQUIRE(infostates[i].second.size() == 2);
      }
      REQUIRE(keys.size() == 6);
    }
  }
  SECTION("single decision game: one infostate") {
    testing::SingleDecisionGame game;
    REQUIRE(enumerate_infostates(game, 0).size() == 1);
    REQUIRE(enumerate_infostates(game, 1).empty());
  }
  SECTION("chance is not a valid player argument") {
    testing::SingleDecisionGame game;
    REQUIRE_THROWS_AS(enumerate_infostates(game, kChancePlayer), GameError);
  }
}

TEST_CASE("perfect recall validation") {
  SECTION("all four benchmark games pass") {
    for (const std::string& name : game_names()) {
      REQUIRE(validate_perfect_recall(*build_game(name)).ok);
    }
  }
  SECTION("merging infostates with different own-action pasts fails") {
    testing::BrokenRecallGame game;
    const PerfectRecallResult result = validate_perfect_recall(game);
    REQUIRE_FALSE(result.ok);
    REQUIRE(result.first != result.second);
    // The offending pair really does map to one key.
    REQUIRE(game.info_state_key(result.first, 0) == game.info_state_key(result.second, 0));
  }
  SECTION("kuhn that forgets the private card after the first action fails") {
    const auto broken = testing::forgetful_kuhn(build_game("kuhn"));
    const PerfectRecallResult result = validate_perfect_recall(*broken);
    REQUIRE_FALSE(result.ok);
  }
}

TEST_CASE("game validation invariants") {
  SECTION("benchmark games validate: zero-sum, chance mass, legal-set consistency") {
    for (const std::string& name : game_names()) {
      REQUIRE_NOTHROW(validate_game(*build_game(name)));
    }
  }
  SECTION("zero-sum holds exactly at every terminal") {
    for (const std::string& name : game_names()) {
      const auto game = build_game(name);
      for (const History& h : enumerate_histories(*game)) {
        if (!game->is_terminal(h)) continue;
        REQUIRE(game->utility(h, 0) + game->utility(h, 1) == 0.0);
      }
    }
  }
  SECTION("apply is defined exactly for the legal actions") {
    const auto game = build_game("kuhn");
    for (const History& h : enumerate_histories(*game)) {
      if (game->is_terminal(h) || game->current_player(h) == kChancePlayer) continue;
      for (const Action& a : game->legal_actions(h)) {
        const History child = game->apply(h, a.id);
        REQUIRE(is_prefix(h, child));
        REQUIRE(child.size() == h.size() + 1);
      }
    }
  }
}

TEST_CASE("info_state_key is constant within each grouped infostate") {
  for (const std::string& name : game_names()) {
    const auto game = build_game(name);
    const GameTree tree = build_game_tree(game);
    for (const auto& entry : tree.infostates) {
      for (int node : entry.members) {
        REQUIRE(game->info_state_key(tree.history_of(node), entry.player) == entry.key);
      }
    }
  }
}

TEST_CASE("game tree mirrors the raw enumeration") {
  for (const std::string& name : {std::string("kuhn"), std::string("goofspiel_4")}) {
    const auto game = build_game(name);
    const GameTree tree = build_game_tree(game);
    const auto histories = enumerate_histories(*game);
    REQUIRE(tree.nodes.size() == histories.size());
    // Preorder node i corresponds to history i.
    for (size_t i = 0; i < histories.size(); ++i) {
      REQUIRE(tree.history_of(static_cast<int>(i)) == histories[i]);
    }
    // Infostate partition sizes agree with enumerate_infostates.
    for (Player p = 0; p < 2; ++p) {
      REQUIRE(tree.num_infostates(p) ==
              static_cast<int>(enumerate_infostates(*game, p).size()));
    }
  }
}

TEST_CASE("prefix relation") {
  REQUIRE(is_prefix({}, {1, 2}));
  REQUIRE(is_prefix({1}, {1, 2}));
  REQUIRE_FALSE(is_prefix({2}, {1, 2}));
  REQUIRE_FALSE(is_prefix({1, 2, 3}, {1, 2}));
}
