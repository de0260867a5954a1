#pragma once

// Neural exploitability descent: one fully-connected policy network shared by
// both players, rectifier activations, a linear output head whose legal
// entries are selected and mapped through softmax. Training is plain gradient
// descent on the baseline-adjusted loss
//
//   - sum_s pi(s) . (q^b(s) - B(s)) + w_r (1/n) sum_i theta_i^2,
//
// where B(s) = pi(s) . q^b(s) is a computed constant (no gradient flows
// through it) and n is the parameter count. Backpropagation is explicit;
// Eigen supplies the dense linear algebra.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/best_response.hpp"
#include "efg/tree.hpp"
#include "efg/values.hpp"
#include "json.hpp"

namespace efg {

struct NeuralOptions {
  int hidden_layers = 1;     // sweep range 1..5; 0 gives a bare linear map
  int hidden_width = 64;     // sweep set {64, 128, 256}
  double reg_weight = 1e-6;  // sweep set {1e-7, 1e-6, 1e-5, 1e-4}
  bool bias = true;
};

struct MlpParams {
  struct Layer {
    Eigen::MatrixXd w;  // rows: output units, cols: inputs
    Eigen::VectorXd b;
    bool has_bias = true;
  };
  std::vector<Layer> layers;
  int input_size = 0;
  int output_size = 0;

  long long parameter_count() const {
    long long n = 0;
    for (const Layer& l : layers) {
      n += l.w.size();
      if (l.has_bias) n += l.b.size();
    }
    return n;
  }
};

// Fan-in-scaled uniform initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
// from a seeded generator; biases start at zero.
inline MlpParams init_mlp(int input_size, int output_size, const NeuralOptions& options,
                          uint64_t seed) {
  if (options.hidden_layers < 0 || options.hidden_layers > 5) {
    throw std::invalid_argument("hidden layer count out of range [0, 5]");
  }
  MlpParams params;
  params.input_size = input_size;
  params.output_size = output_size;
  std::mt19937_64 rng(seed);
  int in = input_size;
  std::vector<int> widths(options.hidden_layers, options.hidden_width);
  widths.push_back(output_size);
  for (int out : widths) {
    MlpParams::Layer layer;
    layer.has_bias = options.bias;
    layer.w.resize(out, in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.w(r, c) = dist(rng);
    }
    layer.b = Eigen::VectorXd::Zero(out);
    params.layers.push_back(std::move(layer));
    in = out;
  }
  return params;
}

inline MlpParams zero_mlp(int input_size, int output_size, const NeuralOptions& options) {
  MlpParams params = init_mlp(input_size, output_size, options, 1);
  for (auto& layer : params.layers) layer.w.setZero();
  return params;
}

// Raw output head for one encoding.
inline std::vector<double> mlp_logits(const MlpParams& params,
                                      const std::vector<uint8_t>& encoding) {
  if (static_cast<int>(encoding.size()) != params.input_size) {
    throw std::invalid_argument("encoding length does not match the network input width");
  }
  Eigen::VectorXd x(params.input_size);
  for (int i = 0; i < params.input_size; ++i) x[i] = encoding[i];
  for (size_t l = 0; l < params.layers.size(); ++l) {
    x = params.layers[l].w * x;
    if (params.layers[l].has_bias) x += params.layers[l].b;
    if (l + 1 < params.layers.size()) x = x.cwiseMax(0.0);
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

// Policy over the legal actions only (in mask order): the legal logits are
// selected and mapped through softmax.
inline SimplexVector forward(const MlpParams& params, const std::vector<uint8_t>& encoding,
                             const std::vector<uint8_t>& legal_mask) {
  const std::vector<double> logits = mlp_logits(params, encoding);
  std::vector<double> selected;
  for (size_t a = 0; a < legal_mask.size() && a < logits.size(); ++a) {
    if (legal_mask[a]) selected.push_back(logits[a]);
  }
  if (selected.empty()) throw std::invalid_argument("forward: all-false legal mask");
  return softmax(selected);
}

// ---------------------------------------------------------------------------
// Batched training over all information states of both players.

struct NeuralBatch {
  Eigen::MatrixXd inputs;              // one row per information state
  std::vector<int> num_legal;          // legal actions are the first k head slots
  std::vector<std::vector<double>> q;  // q^b(s), length num_legal[s]
  std::vector<double> baseline;        // B(s), constant under differentiation
};

namespace detail {

struct ForwardPass {
  std::vector<Eigen::MatrixXd> activations;  // inputs, then each hidden output
  Eigen::MatrixXd logits;
};

inline ForwardPass forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  ForwardPass pass;
  pass.activations.push_back(inputs);
  Eigen::MatrixXd h = inputs;
  for (size_t l = 0; l < params.layers.size(); ++l) {
    Eigen::MatrixXd z = h * params.layers[l].w.transpose();
    if (params.layers[l].has_bias) z.rowwise() += params.layers[l].b.transpose();
    if (l + 1 < params.layers.size()) {
      h = z.cwiseMax(0.0);
      pass.activations.push_back(h);
    } else {
      pass.logits = std::move(z);
    }
  }
  return pass;
}

// Per-row masked softmax over the first num_legal entries.
inline std::vector<SimplexVector> batch_policies(const Eigen::MatrixXd& logits,
                                                 const std::vector<int>& num_legal) {
  std::vector<SimplexVector> out(num_legal.size());
  for (size_t s = 0; s < num_legal.size(); ++s) {
    std::vector<double> z(num_legal[s]);
    for (int a = 0; a < num_legal[s]; ++a) z[a] = logits(static_cast<int>(s), a);
    out[s] = softmax(z);
  }
  return out;
}

}  // namespace detail

inline double regularization_term(const MlpParams& params, double reg_weight) {
  double sum = 0.0;
  for (const auto& layer : params.layers) {
    sum += layer.w.squaredNorm();
    if (layer.has_bias) sum += layer.b.squaredNorm();
  }
  return reg_weight * sum / static_cast<double>(params.parameter_count());
}

// Loss value. The data term is identically zero because the baseline equals
// pi . q, but its gradient is not: B is held constant under differentiation.
inline double loss_value(const MlpParams& params, const NeuralBatch& batch, double reg_weight) {
  const detail::ForwardPass pass = detail::forward_batch(params, batch.inputs);
  const std::vector<SimplexVector> policies =
      detail::batch_policies(pass.logits, batch.num_legal);
  double data = 0.0;
  for (size_t s = 0; s < policies.size(); ++s) {
    for (int a = 0; a < batch.num_legal[s]; ++a) {
      data -= policies[s][a] * (batch.q[s][a] - batch.baseline[s]);
    }
  }
  return data + regularization_term(params, reg_weight);
}

struct MlpGradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

inline MlpGradients backprop(const MlpParams& params, const NeuralBatch& batch,
                             double reg_weight) {
  const detail::ForwardPass pass = detail::forward_batch(params, batch.inputs);
  const std::vector<SimplexVector> policies =
      detail::batch_policies(pass.logits, batch.num_legal);
  const int rows = static_cast<int>(batch.num_legal.size());

  // d(loss)/d(logit a) = -pi_a (c_a - pi . c) with c = q - B: the negated
  // softmax-Jacobian product; illegal head slots get zero.
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(rows, params.output_size);
  for (int s = 0; s < rows; ++s) {
    std::vector<double> c(batch.num_legal[s]);
    for (int a = 0; a < batch.num_legal[s]; ++a) c[a] = batch.q[s][a] - batch.baseline[s];
    const std::vector<double> direction = pg_update_direction(policies[s], c);
    for (int a = 0; a < batch.num_legal[s]; ++a) dlogits(s, a) = -direction[a];
  }

  MlpGradients grads;
  grads.w.resize(params.layers.size());
  grads.b.resize(params.layers.size());
  const double reg = 2.0 * reg_weight / static_cast<double>(params.parameter_count());

  Eigen::MatrixXd delta = std::move(dlogits);
  for (int l = static_cast<int>(params.layers.size()) - 1; l >= 0; --l) {
    grads.w[l] = delta.transpose() * pass.activations[l] + reg * params.layers[l].w;
    if (params.layers[l].has_bias) {
      grads.b[l] = delta.colwise().sum().transpose() + reg * params.layers[l].b;
    } else {
      grads.b[l] = Eigen::VectorXd::Zero(params.layers[l].b.size());
    }
    if (l > 0) {
      delta = (delta * params.layers[l].w).cwiseProduct(
          (pass.activations[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return grads;
}

inline void apply_gradients(MlpParams& params, const MlpGradients& grads, double lr) {
  for (size_t l = 0; l < params.layers.size(); ++l) {
    params.layers[l].w -= lr * grads.w[l];
    if (params.layers[l].has_bias) params.layers[l].b -= lr * grads.b[l];
  }
}

// ---------------------------------------------------------------------------
// The ED training driver.

struct NeuralEd {
  NeuralOptions options;
  MlpParams params;
  Eigen::MatrixXd inputs;      // fixed: one encoding row per information state
  std::vector<int> num_legal;  // per information state
};

inline int max_action_count(const GameTree& tree) {
  int out = 1;
  for (const auto& entry : tree.infostates) out = std::max(out, entry.num_actions);
  return out;
}

inline NeuralEd make_neural_ed(const GameTree& tree, const NeuralOptions& options,
                               uint64_t seed) {
  NeuralEd state;
  state.options = options;
  const int input = tree.game->encoding_size();
  state.params = init_mlp(input, max_action_count(tree), options, seed);
  state.inputs.resize(tree.num_infostates(), input);
  state.num_legal.resize(tree.num_infostates());
  for (int s = 0; s < tree.num_infostates(); ++s) {
    const auto& entry = tree.infostates[s];
    for (int i = 0; i < input; ++i) state.inputs(s, i) = entry.encoding[i];
    state.num_legal[s] = entry.num_actions;
  }
  return state;
}

// Tabular readout: run the network on every information state encoding.
inline DensePolicy network_policy(const GameTree& tree, const NeuralEd& state) {
  if (state.inputs.rows() != tree.num_infostates()) {
    throw std::invalid_argument("network was built for a different game tree");
  }
  const detail::ForwardPass pass = detail::forward_batch(state.params, state.inputs);
  DensePolicy out;
  out.probs = detail::batch_policies(pass.logits, state.num_legal);
  return out;
}

struct NeuralStepInfo {
  std::array<double, 2> value_vs_br{0.0, 0.0};
  DensePolicy policy_before;  // the readout the step was computed from
};

// One ED iteration with a shared network: derive the tabular policy, compute
// each player's best response to it, evaluate counterfactual action values
// against the best responders, and take a single gradient-descent step on the
// loss summed over all information states of both players.
inline NeuralStepInfo neural_ed_step(const GameTree& tree, NeuralEd& state, double lr) {
  NeuralStepInfo info;
  info.policy_before = network_policy(tree, state);

  NeuralBatch batch;
  batch.inputs = state.inputs;
  batch.num_legal = state.num_legal;
  batch.q.resize(tree.num_infostates());
  batch.baseline.assign(tree.num_infostates(), 0.0);

  const std::array<BestResponseDense, 2> br = {
      best_response_dense(tree, info.policy_before, 0),
      best_response_dense(tree, info.policy_before, 1)};
  for (Player i = 0; i < 2; ++i) {
    const DensePolicy joint = pure_dense(tree, br[1 - i], info.policy_before);
    const TreeEvaluation eval = evaluate_tree(tree, joint);
    const ValueReport rep =
        action_values_from(tree, eval, joint, i, ValueMode::kCounterfactual);
    info.value_vs_br[i] = eval.root_value(i);
    for (int s = tree.infostate_begin[i]; s < tree.infostate_begin[i + 1]; ++s) {
      batch.q[s] = rep.action_values[s - rep.base];
      double b = 0.0;
      for (size_t a = 0; a < batch.q[s].size(); ++a) {
        b += info.policy_before.probs[s][a] * batch.q[s][a];
      }
      batch.baseline[s] = b;
    }
  }
  apply_gradients(state.params, backprop(state.params, batch, state.options.reg_weight), lr);
  return info;
}

// ---------------------------------------------------------------------------
// Checkpoints: versioned JSON of layer shapes plus row-major weights.

inline nlohmann::ordered_json checkpoint_to_json(const MlpParams& params) {
  nlohmann::ordered_json doc;
  doc["format"] = "efg-mlp";
  doc["version"] = 1;
  doc["input"] = params.input_size;
  doc["output"] = params.output_size;
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& layer : params.layers) {
    nlohmann::ordered_json entry;
    entry["rows"] = layer.w.rows();
    entry["cols"] = layer.w.cols();
    std::vector<double> w;
    w.reserve(layer.w.size());
    for (int r = 0; r < layer.w.rows(); ++r) {
      for (int c = 0; c < layer.w.cols(); ++c) w.push_back(layer.w(r, c));
    }
    entry["weights"] = std::move(w);
    entry["has_bias"] = layer.has_bias;
    if (layer.has_bias) {
      entry["bias"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
    }
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

inline MlpParams checkpoint_from_json(const nlohmann::json& doc) {
  if (!doc.contains("format") || doc["format"] != "efg-mlp") {
    throw std::invalid_argument("not an efg-mlp checkpoint");
  }
  MlpParams params;
  params.input_size = doc.at("input").get<int>();
  params.output_size = doc.at("output").get<int>();
  for (const auto& entry : doc.at("layers")) {
    MlpParams::Layer layer;
    const int rows = entry.at("rows").get<int>();
    const int cols = entry.at("cols").get<int>();
    const std::vector<double> w = entry.at("weights").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != rows * cols) {
      throw std::invalid_argument("checkpoint weight count does not match its shape");
    }
    layer.w.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) layer.w(r, c) = w[r * cols + c];
    }
    layer.has_bias = entry.at("has_bias").get<bool>();
    layer.b = Eigen::VectorXd::Zero(rows);
    if (layer.has_bias) {
      const std::vector<double> b = entry.at("bias").get<std::vector<double>>();
      for (int r = 0; r < rows; ++r) layer.b[r] = b[r];
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

inline void save_checkpoint(const MlpParams& params, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << checkpoint_to_json(params).dump(2) << '\n';
}

inline MlpParams load_checkpoint(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  f >> doc;
  return checkpoint_from_json(doc);
}

}  // namespace efg
