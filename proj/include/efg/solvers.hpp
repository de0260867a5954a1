#pragma once

// Iterative equilibrium solvers: XFP, CFR self-play, CFR against a best
// responder with pluggable local learners, and the exploitability-descent
// family. CFR-BR and every ED variant share one iteration frame: compute
// both best responses against the pre-update joint policy, evaluate each
// player's action values against the opponent's best responder, then apply
// the local update rule. The shared frame is what makes the analyzed
// equivalences (ED(qc, l2) = CFR-BR(GIGA), ED(qc, md) = CFR-BR(hedge)) exact
// in code as well as on paper.
//
// Every tabular solver is a deterministic single-threaded state machine;
// distinct runs may execute in parallel.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "efg/best_response.hpp"
#include "efg/convergence.hpp"
#include "efg/games.hpp"
#include "efg/neural.hpp"
#include "efg/values.hpp"

namespace efg {

enum class LrSchedule { kConstant, kInvSqrt };

struct StepSize {
  LrSchedule schedule = LrSchedule::kConstant;
  double scale = 0.0;  // 0 means "use the algorithm default"

  double at(long long t) const {
    return schedule == LrSchedule::kConstant ? scale
                                             : scale / std::sqrt(static_cast<double>(t));
  }
};

// ---------------------------------------------------------------------------
// Best-iterate tracking: among the iterates seen so far, keep per player the
// policy with the highest expected value versus the opponent's best response.

struct BestIterateTracker {
  std::array<double, 2> best_value{-std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity()};
  std::array<long long, 2> best_iteration{-1, -1};
  std::array<std::vector<std::vector<double>>, 2> best_rows;  // player's infostate slice

  void observe(const GameTree& tree, Player i, double value_vs_br, long long iteration,
               const DensePolicy& policy) {
    if (value_vs_br <= best_value[i]) return;
    best_value[i] = value_vs_br;
    best_iteration[i] = iteration;
    best_rows[i].assign(policy.probs.begin() + tree.infostate_begin[i],
                        policy.probs.begin() + tree.infostate_begin[i + 1]);
  }

  bool seen() const { return best_iteration[0] >= 0 && best_iteration[1] >= 0; }

  // NashConv of the joint formed by the two stored policies. In a zero-sum
  // game it equals minus the sum of the stored worst-case values.
  double best_nash_conv() const { return -(best_value[0] + best_value[1]); }

  DensePolicy best_joint(const GameTree& tree) const {
    DensePolicy out = uniform_dense(tree);
    for (Player i = 0; i < 2; ++i) {
      for (size_t k = 0; k < best_rows[i].size(); ++k) {
        out.probs[tree.infostate_begin[i] + static_cast<int>(k)] = best_rows[i][k];
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// CFR self-play.

inline SimplexVector regret_match(const std::vector<double>& regrets) {
  double positive_sum = 0.0;
  for (double r : regrets) positive_sum += r > 0.0 ? r : 0.0;
  SimplexVector out(regrets.size());
  if (positive_sum > 0.0) {
    for (size_t a = 0; a < regrets.size(); ++a) {
      out[a] = (regrets[a] > 0.0 ? regrets[a] : 0.0) / positive_sum;
    }
  } else {
    out.assign(regrets.size(), 1.0 / static_cast<double>(regrets.size()));
  }
  return out;
}

struct CfrState {
  std::vector<std::vector<double>> regrets;    // cumulative counterfactual regret
  std::vector<std::vector<double>> avg_accum;  // own-reach-weighted policy sums
  DensePolicy current;
  long long iteration = 0;
};

inline CfrState make_cfr_state(const GameTree& tree) {
  CfrState state;
  state.current = uniform_dense(tree);
  state.regrets.resize(tree.num_infostates());
  state.avg_accum.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    state.regrets[s].assign(tree.infostates[s].num_actions, 0.0);
    state.avg_accum[s].assign(tree.infostates[s].num_actions, 0.0);
  }
  return state;
}

// One simultaneous CFR iteration: accumulate r(s,a) = q^c(s,a) - v^c(s) and
// the own-reach-weighted current policy for both players, then regret-match.
inline void cfr_step(const GameTree& tree, CfrState& state) {
  const TreeEvaluation eval = evaluate_tree(tree, state.current);
  for (Player i = 0; i < 2; ++i) {
    const ValueReport rep =
        action_values_from(tree, eval, state.current, i, ValueMode::kCounterfactual);
    for (int s = tree.infostate_begin[i]; s < tree.infostate_begin[i + 1]; ++s) {
      const int off = s - rep.base;
      const std::vector<double>& q = rep.action_values[off];
      for (size_t a = 0; a < q.size(); ++a) {
        state.regrets[s][a] += q[a] - rep.state_values[off];
        state.avg_accum[s][a] += rep.own_reach[off] * state.current.probs[s][a];
      }
    }
  }
  for (int s = 0; s < tree.num_infostates(); ++s) {
    state.current.probs[s] = regret_match(state.regrets[s]);
  }
  ++state.iteration;
}

inline DensePolicy average_policy_dense(const GameTree& tree,
                                        const std::vector<std::vector<double>>& avg_accum) {
  DensePolicy out;
  out.probs.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    double sum = 0.0;
    for (double w : avg_accum[s]) sum += w;
    if (sum > 0.0) {
      out.probs[s].resize(avg_accum[s].size());
      for (size_t a = 0; a < avg_accum[s].size(); ++a) out.probs[s][a] = avg_accum[s][a] / sum;
    } else {
      out.probs[s].assign(avg_accum[s].size(), 1.0 / static_cast<double>(avg_accum[s].size()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The shared CFR-BR / ED iteration frame.

enum class LocalRule {
  kRegretMatching,  // CFR-BR proper
  kGiga,            // online gradient ascent with l2 simplex projection
  kPolicyGradient,  // softmax-Jacobian ascent on logits
  kMirrorDescent    // accumulate values into logits; softmax transfer (hedge)
};

struct BrFamilyState {
  LocalRule rule = LocalRule::kRegretMatching;
  ValueMode value_mode = ValueMode::kCounterfactual;
  ZeroMassHandling zero_mass = ZeroMassHandling::kError;
  std::vector<std::vector<double>> table;  // regrets (RM) or logits (PG / MD)
  DensePolicy current;
  std::vector<std::vector<double>> avg_accum;
  long long iteration = 0;
  BestIterateTracker tracker;
  bool degenerate_seen = false;
};

inline BrFamilyState make_br_family_state(const GameTree& tree, LocalRule rule,
                                          ValueMode value_mode = ValueMode::kCounterfactual,
                                          ZeroMassHandling zero_mass = ZeroMassHandling::kError) {
  BrFamilyState state;
  state.rule = rule;
  state.value_mode = value_mode;
  state.zero_mass = zero_mass;
  state.current = uniform_dense(tree);
  state.table.resize(tree.num_infostates());
  state.avg_accum.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    state.table[s].assign(tree.infostates[s].num_actions, 0.0);
    state.avg_accum[s].assign(tree.infostates[s].num_actions, 0.0);
  }
  return state;
}

struct BrStepOutcome {
  // v_i(pi_i^{t-1}, b_{-i}^t): each player's value against the opponent's
  // best responder, i.e. the worst-case value of the pre-update policy.
  std::array<double, 2> value_vs_br{0.0, 0.0};
  // Instantaneous external regret vs the same best responders (only filled
  // when measured): max_pi v_i(pi, b_{-i}^t) - v_i(pi_i^{t-1}, b_{-i}^t).
  std::array<double, 2> inst_regret{0.0, 0.0};
  bool degenerate = false;
};

inline BrStepOutcome br_family_step(const GameTree& tree, BrFamilyState& state, double alpha,
                                    std::array<Player, 2> order = {0, 1},
                                    bool measure_regret = false) {
  // Both best responses are functions of the pre-update joint policy only.
  const std::array<BestResponseDense, 2> br = {best_response_dense(tree, state.current, 0),
                                               best_response_dense(tree, state.current, 1)};
  BrStepOutcome out;
  for (Player i : order) {
    // Joint (pi_i, b_{-i}); the opponent's rows are replaced by the pure BR,
    // so a previously applied update to the other player cannot leak in.
    const DensePolicy joint = pure_dense(tree, br[1 - i], state.current);
    const TreeEvaluation eval = evaluate_tree(tree, joint);
    const ValueReport rep =
        action_values_from(tree, eval, joint, i, state.value_mode, state.zero_mass);
    out.value_vs_br[i] = eval.root_value(i);
    state.tracker.observe(tree, i, out.value_vs_br[i], state.iteration, state.current);
    if (measure_regret) {
      out.inst_regret[i] = best_response_dense(tree, joint, i).value - out.value_vs_br[i];
    }
    for (int s = tree.infostate_begin[i]; s < tree.infostate_begin[i + 1]; ++s) {
      const int off = s - rep.base;
      if (rep.degenerate[off]) out.degenerate = true;
      const std::vector<double>& q = rep.action_values[off];
      std::vector<double>& row = state.current.probs[s];
      switch (state.rule) {
        case LocalRule::kRegretMatching: {
          for (size_t a = 0; a < q.size(); ++a) {
            state.table[s][a] += q[a] - rep.state_values[off];
            state.avg_accum[s][a] += rep.own_reach[off] * row[a];
          }
          row = regret_match(state.table[s]);
          break;
        }
        case LocalRule::kGiga: {
          std::vector<double> shifted = row;
          for (size_t a = 0; a < q.size(); ++a) shifted[a] += alpha * q[a];
          row = project_l2_simplex(shifted);
          break;
        }
        case LocalRule::kPolicyGradient: {
          const std::vector<double> direction = pg_update_direction(row, q);
          for (size_t a = 0; a < q.size(); ++a) state.table[s][a] += alpha * direction[a];
          row = softmax(state.table[s]);
          break;
        }
        case LocalRule::kMirrorDescent: {
          for (size_t a = 0; a < q.size(); ++a) state.table[s][a] += alpha * q[a];
          row = softmax(state.table[s]);
          break;
        }
      }
    }
  }
  state.degenerate_seen |= out.degenerate;
  ++state.iteration;
  return out;
}

// ---------------------------------------------------------------------------
// Public solver surfaces over the shared frame.

enum class EdVariant { kQL2, kQcL2, kQcSoftmax, kQcMd };

struct EdState {
  EdVariant variant = EdVariant::kQcSoftmax;
  BrFamilyState core;
};

inline EdState make_ed_state(const GameTree& tree, EdVariant variant,
                             ZeroMassHandling zero_mass = ZeroMassHandling::kError) {
  EdState state;
  state.variant = variant;
  switch (variant) {
    case EdVariant::kQL2:
      state.core = make_br_family_state(tree, LocalRule::kGiga, ValueMode::kQ, zero_mass);
      break;
    case EdVariant::kQcL2:
      state.core = make_br_family_state(tree, LocalRule::kGiga, ValueMode::kCounterfactual);
      break;
    case EdVariant::kQcSoftmax:
      state.core = make_br_family_state(tree, LocalRule::kPolicyGradient);
      break;
    case EdVariant::kQcMd:
      state.core = make_br_family_state(tree, LocalRule::kMirrorDescent);
      break;
  }
  return state;
}

inline BrStepOutcome ed_step(const GameTree& tree, EdState& state, double alpha,
                             std::array<Player, 2> order = {0, 1}, bool measure_regret = false) {
  return br_family_step(tree, state.core, alpha, order, measure_regret);
}

struct CfrBrState {
  bool hedge = false;
  BrFamilyState core;
};

inline CfrBrState make_cfr_br_state(const GameTree& tree, bool hedge) {
  CfrBrState state;
  state.hedge = hedge;
  state.core = make_br_family_state(
      tree, hedge ? LocalRule::kMirrorDescent : LocalRule::kRegretMatching);
  return state;
}

// For the hedge learner, `alpha` is the inverse temperature 1/tau; regret
// matching ignores it.
inline BrStepOutcome cfr_br_step(const GameTree& tree, CfrBrState& state, double alpha = 0.0,
                                 bool measure_regret = false) {
  return br_family_step(tree, state.core, alpha, {0, 1}, measure_regret);
}

// ---------------------------------------------------------------------------
// XFP (extensive-form fictitious play) with the realization-weighted
// behavioral update, lambda_t = 1/t:
//   pi^t(s) = pi^{t-1}(s)
//           + lambda eta_b(s) / ((1-lambda) eta_pi(s) + lambda eta_b(s))
//             * (b^t(s) - pi^{t-1}(s)).
// At infostates the update cannot reach (zero denominator), the previous
// policy is kept.

struct XfpState {
  DensePolicy average;
  long long iteration = 0;
};

inline XfpState make_xfp_state(const GameTree& tree) {
  return XfpState{uniform_dense(tree), 0};
}

inline void xfp_step(const GameTree& tree, XfpState& state) {
  const long long t = state.iteration + 1;
  const double lambda = 1.0 / static_cast<double>(t);
  const std::array<BestResponseDense, 2> br = {best_response_dense(tree, state.average, 0),
                                               best_response_dense(tree, state.average, 1)};
  for (Player i = 0; i < 2; ++i) {
    const std::vector<double> eta_pi = own_reaches(tree, state.average, i);
    const DensePolicy br_pure = pure_dense(tree, br[i], state.average);
    const std::vector<double> eta_b = own_reaches(tree, br_pure, i);
    for (int s = tree.infostate_begin[i]; s < tree.infostate_begin[i + 1]; ++s) {
      const double denom = (1.0 - lambda) * eta_pi[s] + lambda * eta_b[s];
      if (denom == 0.0) continue;
      const double w = lambda * eta_b[s] / denom;
      std::vector<double>& row = state.average.probs[s];
      const int chosen = br[i].action(s);
      for (size_t a = 0; a < row.size(); ++a) {
        row[a] += w * ((static_cast<int>(a) == chosen ? 1.0 : 0.0) - row[a]);
      }
    }
  }
  state.iteration = t;
}

// ---------------------------------------------------------------------------
// Experiment loop.

enum class Algorithm {
  kXfp,
  kCfr,
  kCfrBr,
  kCfrBrHedge,
  kEdQL2,
  kEdQcL2,
  kEdQcSoftmax,
  kEdQcMd,
  kEdNeural
};

inline const std::vector<std::pair<std::string, Algorithm>>& algorithm_ids() {
  static const std::vector<std::pair<std::string, Algorithm>> ids = {
      {"xfp", Algorithm::kXfp},
      {"cfr", Algorithm::kCfr},
      {"cfr_br", Algorithm::kCfrBr},
      {"cfr_br_hedge", Algorithm::kCfrBrHedge},
      {"ed_q_l2", Algorithm::kEdQL2},
      {"ed_qc_l2", Algorithm::kEdQcL2},
      {"ed_qc_softmax", Algorithm::kEdQcSoftmax},
      {"ed_qc_md", Algorithm::kEdQcMd},
      {"ed_neural", Algorithm::kEdNeural}};
  return ids;
}

inline std::optional<Algorithm> algorithm_from_id(const std::string& id) {
  for (const auto& [name, alg] : algorithm_ids()) {
    if (name == id) return alg;
  }
  return std::nullopt;
}

inline std::string algorithm_id(Algorithm alg) {
  for (const auto& [name, a] : algorithm_ids()) {
    if (a == alg) return name;
  }
  return "?";
}

struct SolverConfig {
  std::string game_name = "kuhn";
  Algorithm algorithm = Algorithm::kCfr;
  long long iterations = 1000;
  StepSize step{};                        // scale 0 picks the algorithm default
  std::optional<long long> eval_every;    // empty: powers of two plus the final iterate
  bool q_value_fallback = false;          // ed_q_l2: degrade to q^c at zero-mass states
  bool measure_regret = false;            // accumulate online regret (extra BR per step)
  bool deterministic = false;             // fixed seed, wall_ms reported as 0
  std::optional<TabularPolicy> initial_policy;  // l2 variants and XFP; default uniform
  std::optional<LogitTable> initial_logits;     // softmax variants; default zeros
  NeuralOptions neural{};
  uint64_t seed = 0;                      // neural weight init; 0 picks a fixed default
};

// Calibrated defaults, frozen after a desk-scale sweep; the inv-sqrt schedule
// stays available for the l2 variants as the theory-faithful setting.
inline StepSize default_step(Algorithm alg) {
  switch (alg) {
    case Algorithm::kEdQL2:
    case Algorithm::kEdQcL2:
      return {LrSchedule::kInvSqrt, 1.0};
    case Algorithm::kEdQcSoftmax:
      return {LrSchedule::kConstant, 2.0};
    case Algorithm::kEdQcMd:
    case Algorithm::kCfrBrHedge:
      return {LrSchedule::kConstant, 1.0};
    case Algorithm::kEdNeural:
      return {LrSchedule::kConstant, 0.125};  // 2^-3
    default:
      return {LrSchedule::kConstant, 1.0};
  }
}

struct SolverRunError : std::runtime_error {
  SolverRunError(long long iteration, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
        iteration(iteration) {}
  long long iteration;
};

struct RunResult {
  std::vector<ConvergenceRecord> records;
  TabularPolicy final_policy;  // the reported policy: average (CFR/XFP), current otherwise
  std::optional<TabularPolicy> best_policy;
  std::array<double, 2> average_regret{0.0, 0.0};  // when measured
  CsvMetadata metadata;
};

inline bool is_record_point(long long t, const std::optional<long long>& every, long long total) {
  if (every) return t % *every == 0;
  return (t & (t - 1)) == 0 || t == total;
}

namespace detail {

inline void seed_initial_point(const GameTree& tree, const SolverConfig& config,
                               BrFamilyState& state) {
  if (config.initial_logits &&
      (state.rule == LocalRule::kPolicyGradient || state.rule == LocalRule::kMirrorDescent)) {
    for (int s = 0; s < tree.num_infostates(); ++s) {
      const auto& entry = tree.infostates[s];
      auto it = config.initial_logits->logits.find({entry.player, entry.key});
      if (it == config.initial_logits->logits.end()) {
        throw GameError("initial logits missing information state '" + entry.key + "'");
      }
      if (static_cast<int>(it->second.size()) != entry.num_actions) {
        throw GameError("initial logits length mismatch at '" + entry.key + "'");
      }
      state.table[s] = it->second;
      state.current.probs[s] = softmax(state.table[s]);
    }
  }
  if (config.initial_policy && state.rule == LocalRule::kGiga) {
    state.current = dense_from_tabular(tree, *config.initial_policy);
  }
}

inline ConvergenceRecord evaluate_policy_record(const GameTree& tree, const DensePolicy& reported,
                                                long long iteration, long long wall_ms,
                                                BestIterateTracker* tracker,
                                                const DensePolicy* current_for_tracker) {
  const BestResponseDense br0 = best_response_dense(tree, reported, 0);
  const BestResponseDense br1 = best_response_dense(tree, reported, 1);
  const std::array<double, 2> v = expected_value(tree, reported);
  ConvergenceRecord record;
  record.iteration = iteration;
  record.exploitability_p0 = br0.value - v[0];
  record.exploitability_p1 = br1.value - v[1];
  record.nashconv = record.exploitability_p0 + record.exploitability_p1;
  record.value_p0 = v[0];
  record.wall_ms = wall_ms;
  if (tracker && current_for_tracker) {
    // The BR values just computed are exactly the worst-case values of the
    // current iterate; fold them into the tracker before reporting it.
    tracker->observe(tree, 0, -br1.value, iteration, *current_for_tracker);
    tracker->observe(tree, 1, -br0.value, iteration, *current_for_tracker);
    record.best_iter_nashconv = tracker->best_nash_conv();
  }
  return record;
}

}  // namespace detail

inline RunResult run(const GameTree& tree, const SolverConfig& config) {
  if (config.eval_every && *config.eval_every < 1) {
    throw SolverRunError(0, "evaluation cadence must be >= 1");
  }
  const long long total = config.iterations;
  StepSize step = config.step;
  if (step.scale == 0.0) step = default_step(config.algorithm);
  const uint64_t seed = config.seed != 0 ? config.seed : 0x5eedULL;

  RunResult result;
  result.metadata = {{"game", config.game_name},
                     {"algorithm", algorithm_id(config.algorithm)},
                     {"iterations", std::to_string(total)},
                     {"lr", (step.schedule == LrSchedule::kInvSqrt ? std::string("sqrt:") : std::string("const:")) + format_real(step.scale)},
                     {"eval_every", config.eval_every ? std::to_string(*config.eval_every) : "pow2"}};

  const auto now_ms = [start = std::chrono::steady_clock::now(), &config]() -> long long {
    if (config.deterministic) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  std::array<double, 2> regret_sum{0.0, 0.0};
  long long at = 0;  // iteration in flight, for error reports

  const auto finish_tracked = [&](BrFamilyState& core, const DensePolicy& current) {
    result.final_policy = tabular_from_dense(tree, current);
    if (core.tracker.seen()) {
      result.best_policy = tabular_from_dense(tree, core.tracker.best_joint(tree));
    }
    if (config.measure_regret && total > 0) {
      result.average_regret = {regret_sum[0] / static_cast<double>(total),
                               regret_sum[1] / static_cast<double>(total)};
    }
  };

  try {
    switch (config.algorithm) {
      case Algorithm::kCfr: {
        CfrState state = make_cfr_state(tree);
        for (long long t = 1; t <= total; ++t) {
          at = t;
          cfr_step(tree, state);
          if (is_record_point(t, config.eval_every, total)) {
            const DensePolicy avg = average_policy_dense(tree, state.avg_accum);
            result.records.push_back(
                detail::evaluate_policy_record(tree, avg, t, now_ms(), nullptr, nullptr));
          }
        }
        result.final_policy = tabular_from_dense(
            tree, total > 0 ? average_policy_dense(tree, state.avg_accum) : state.current);
        break;
      }
      case Algorithm::kXfp: {
        XfpState state = make_xfp_state(tree);
        if (config.initial_policy) {
          state.average = dense_from_tabular(tree, *config.initial_policy);
        }
        for (long long t = 1; t <= total; ++t) {
          at = t;
          xfp_step(tree, state);
          if (is_record_point(t, config.eval_every, total)) {
            result.records.push_back(detail::evaluate_policy_record(tree, state.average, t,
                                                                    now_ms(), nullptr, nullptr));
          }
        }
        result.final_policy = tabular_from_dense(tree, state.average);
        break;
      }
      case Algorithm::kCfrBr:
      case Algorithm::kCfrBrHedge: {
        CfrBrState state = make_cfr_br_state(tree, config.algorithm == Algorithm::kCfrBrHedge);
        for (long long t = 1; t <= total; ++t) {
          at = t;
          const BrStepOutcome outcome =
              cfr_br_step(tree, state, step.at(t), config.measure_regret);
          regret_sum[0] += outcome.inst_regret[0];
          regret_sum[1] += outcome.inst_regret[1];
          if (is_record_point(t, config.eval_every, total)) {
            result.records.push_back(detail::evaluate_policy_record(
                tree, state.core.current, t, now_ms(), &state.core.tracker,
                &state.core.current));
          }
        }
        finish_tracked(state.core, state.core.current);
        break;
      }
      case Algorithm::kEdQL2:
      case Algorithm::kEdQcL2:
      case Algorithm::kEdQcSoftmax:
      case Algorithm::kEdQcMd: {
        const EdVariant variant = config.algorithm == Algorithm::kEdQL2       ? EdVariant::kQL2
                                  : config.algorithm == Algorithm::kEdQcL2    ? EdVariant::kQcL2
                                  : config.algorithm == Algorithm::kEdQcSoftmax
                                      ? EdVariant::kQcSoftmax
                                      : EdVariant::kQcMd;
        EdState state = make_ed_state(tree, variant,
                                      config.q_value_fallback ? ZeroMassHandling::kFallback
                                                              : ZeroMassHandling::kError);
        detail::seed_initial_point(tree, config, state.core);
        for (long long t = 1; t <= total; ++t) {
          at = t;
          const BrStepOutcome outcome =
              ed_step(tree, state, step.at(t), {0, 1}, config.measure_regret);
          regret_sum[0] += outcome.inst_regret[0];
          regret_sum[1] += outcome.inst_regret[1];
          if (is_record_point(t, config.eval_every, total)) {
            result.records.push_back(detail::evaluate_policy_record(
                tree, state.core.current, t, now_ms(), &state.core.tracker,
                &state.core.current));
          }
        }
        if (state.core.degenerate_seen) {
          result.metadata.push_back({"zero_mass_fallback", "hit"});
        }
        finish_tracked(state.core, state.core.current);
        break;
      }
      case Algorithm::kEdNeural: {
        NeuralEd state = make_neural_ed(tree, config.neural, seed);
        result.metadata.push_back({"init", "fan_in_uniform"});
        result.metadata.push_back({"seed", std::to_string(seed)});
        BestIterateTracker tracker;
        for (long long t = 1; t <= total; ++t) {
          at = t;
          const NeuralStepInfo info = neural_ed_step(tree, state, step.at(t));
          tracker.observe(tree, 0, info.value_vs_br[0], t - 1, info.policy_before);
          tracker.observe(tree, 1, info.value_vs_br[1], t - 1, info.policy_before);
          if (is_record_point(t, config.eval_every, total)) {
            const DensePolicy readout = network_policy(tree, state);
            result.records.push_back(detail::evaluate_policy_record(tree, readout, t, now_ms(),
                                                                    &tracker, &readout));
          }
        }
        result.final_policy = tabular_from_dense(tree, network_policy(tree, state));
        if (tracker.seen()) {
          result.best_policy = tabular_from_dense(tree, tracker.best_joint(tree));
        }
        break;
      }
    }
  } catch (const SolverRunError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverRunError(at, e.what());
  }
  return result;
}

inline RunResult run(const SolverConfig& config) {
  const std::shared_ptr<const Game> game = build_game(config.game_name);
  const GameTree tree = build_game_tree(game);
  return run(tree, config);
}

}  // namespace efg
