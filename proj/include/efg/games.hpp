#pragma once

// Game registry: maps CLI-facing identifiers to validated game instances.

#include <memory>
#include <string>
#include <vector>

#include "efg/core.hpp"
#include "efg/games/goofspiel.hpp"
#include "efg/games/kuhn.hpp"
#include "efg/games/leduc.hpp"
#include "efg/games/liars_dice.hpp"

namespace efg {

inline const std::vector<std::string>& game_names() {
  static const std::vector<std::string> names = {"kuhn", "leduc", "liars_dice_11",
                                                 "goofspiel_4"};
  return names;
}

// Constructs one of the four benchmark games and validates it (zero-sum
// terminals, chance probabilities, legal-set consistency, perfect recall).
// Accepts the CLI identifiers plus the 'liars_dice' / 'goofspiel' shorthands.
inline std::shared_ptr<const Game> build_game(const std::string& name) {
  std::shared_ptr<const Game> game;
  if (name == "kuhn") {
    game = std::make_shared<KuhnGame>();
  } else if (name == "leduc") {
    game = std::make_shared<LeducGame>();
  } else if (name == "liars_dice_11" || name == "liars_dice") {
    game = std::make_shared<LiarsDiceGame>();
  } else if (name == "goofspiel_4" || name == "goofspiel") {
    game = std::make_shared<GoofspielGame>();
  } else {
    throw GameError("unknown game: " + name);
  }
  validate_game(*game);
  return game;
}

}  // namespace efg
