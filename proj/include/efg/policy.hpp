#pragma once

// Tabular and logit policy representations, the Euclidean simplex projection,
// the softmax transfer, and the softmax-Jacobian update direction used by the
// policy-gradient solvers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/core.hpp"
#include "json.hpp"

namespace efg {

// A probability distribution over one decision point's legal actions:
// entries nonnegative, summing to 1.
using SimplexVector = std::vector<double>;

inline bool is_simplex(const SimplexVector& v, double tol = 1e-9) {
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

// Euclidean projection onto the probability simplex via descending-sort
// thresholding: find the largest k whose running mean admits a positive
// shifted value, subtract the threshold, clamp at zero. Idempotent.
inline SimplexVector project_l2_simplex(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("project_l2_simplex: empty vector");
  double sum = 0.0;
  bool nonnegative = true;
  for (double x : v) {
    if (std::isnan(x)) throw std::invalid_argument("project_l2_simplex: NaN input");
    nonnegative = nonnegative && x >= 0.0;
    sum += x;
  }
  // Points already on the simplex (to rounding) are fixed exactly; this also
  // makes the projection exactly idempotent.
  if (nonnegative && std::abs(sum - 1.0) <= 1e-12) return v;
  // All-equal inputs project to exact uniform; short-circuit to avoid drift.
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
    return SimplexVector(v.size(), 1.0 / static_cast<double>(v.size()));
  }
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double running = 0.0;
  double threshold = 0.0;
  for (int k = 0; k < static_cast<int>(u.size()); ++k) {
    running += u[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) threshold = candidate;
  }
  SimplexVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(0.0, v[i] - threshold);
  }
  return out;
}

// Overflow-safe softmax (max subtraction); strictly positive output.
inline SimplexVector softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty vector");
  const double top = *std::max_element(logits.begin(), logits.end());
  SimplexVector out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    // The shifted exponent is floored so saturated entries stay positive.
    out[i] = std::exp(std::max(logits[i] - top, -700.0));
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

// <grad_theta softmax(theta), q>: component a equals pi(a) (q_a - pi . q),
// the policy-scaled regret. Components sum to zero.
inline std::vector<double> pg_update_direction(const SimplexVector& pi,
                                               const std::vector<double>& q) {
  if (pi.size() != q.size()) {
    throw std::invalid_argument("pg_update_direction: length mismatch");
  }
  double baseline = 0.0;
  for (size_t a = 0; a < pi.size(); ++a) baseline += pi[a] * q[a];
  std::vector<double> out(pi.size());
  for (size_t a = 0; a < pi.size(); ++a) out[a] = pi[a] * (q[a] - baseline);
  return out;
}

// Behavioral policy for one player or for the joint: a map from information
// state to the distribution over that state's legal actions, in the game's
// canonical action order.
struct TabularPolicy {
  std::map<InfoStateKey, SimplexVector> table;

  const SimplexVector& at(const InfoStateKey& key) const {
    auto it = table.find(key);
    if (it == table.end()) {
      throw GameError("policy missing information state '" + key.key + "'");
    }
    return it->second;
  }
};

// Unconstrained per-infostate parameters for softmax-parameterized policies.
struct LogitTable {
  std::map<InfoStateKey, std::vector<double>> logits;
};

inline TabularPolicy uniform_policy(const Game& game, Player player) {
  TabularPolicy policy;
  for (const auto& [key, actions] : enumerate_infostates(game, player)) {
    policy.table.emplace(key,
                         SimplexVector(actions.size(), 1.0 / static_cast<double>(actions.size())));
  }
  return policy;
}

inline TabularPolicy uniform_joint_policy(const Game& game) {
  TabularPolicy joint = uniform_policy(game, 0);
  joint.table.merge(uniform_policy(game, 1).table);
  return joint;
}

// ---------------------------------------------------------------------------
// Serialization. UTF-8 JSON mapping hex-encoded infostate key -> probability
// array, with a header recording the game and player. Doubles are written in
// shortest round-trip form, so parse(write(p)) == p exactly.

inline std::string hex_encode(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 0xf];
  }
  return out;
}

inline std::string hex_decode(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex_decode: odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("hex_decode: invalid digit");
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    out += static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1]));
  }
  return out;
}

// `player` is 0, 1, or -1 for a joint policy.
inline nlohmann::ordered_json policy_to_json(const TabularPolicy& policy,
                                             const std::string& game_name, int player) {
  nlohmann::ordered_json doc;
  doc["format"] = "efg-policy";
  doc["version"] = 1;
  doc["game"] = game_name;
  doc["player"] = player < 0 ? "joint" : std::to_string(player);
  nlohmann::ordered_json table = nlohmann::ordered_json::object();
  for (const auto& [key, probs] : policy.table) {
    table[hex_encode(key.key)] = probs;
  }
  doc["table"] = std::move(table);
  return doc;
}

struct PolicyDocument {
  TabularPolicy policy;
  std::string game;
  int player = -1;  // -1 means joint
};

inline PolicyDocument policy_from_json(const nlohmann::json& doc) {
  if (!doc.contains("format") || doc["format"] != "efg-policy") {
    throw std::invalid_argument("not an efg-policy document");
  }
  PolicyDocument out;
  out.game = doc.at("game").get<std::string>();
  const std::string player = doc.at("player").get<std::string>();
  out.player = player == "joint" ? -1 : std::stoi(player);
  for (const auto& [hex, probs] : doc.at("table").items()) {
    std::string key = hex_decode(hex);
    // Keys are player-prefixed by construction ("0:..." / "1:...").
    if (key.empty() || (key[0] != '0' && key[0] != '1')) {
      throw std::invalid_argument("policy key without player prefix");
    }
    const Player p = key[0] - '0';
    out.policy.table.emplace(InfoStateKey{p, key}, probs.get<std::vector<double>>());
  }
  return out;
}

inline void save_policy(const TabularPolicy& policy, const std::string& game_name, int player,
                        const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << policy_to_json(policy, game_name, player).dump(2) << '\n';
}

inline PolicyDocument load_policy(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  f >> doc;
  return policy_from_json(doc);
}

}  // namespace efg
