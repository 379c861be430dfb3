#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tskit/gate_graph.hpp"
#include "tskit/random.hpp"

namespace tskit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Node-major activations: one row per node.
using Embeddings = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr int kBenignClass = 0;
inline constexpr int kTrojanClass = 1;

// h_u' = ReLU(W a_u + B h_u), where a_u is the mean of the neighbours'
// embeddings. W and B are the two blocks of the weight applied to the
// concatenation [a_u, h_u].
struct SageLayer {
  Matrix W;  // d_out x d_in, neighbour aggregate
  Matrix B;  // d_out x d_in, node's own embedding

  Eigen::Index in_width() const noexcept { return W.cols(); }
  Eigen::Index out_width() const noexcept { return W.rows(); }
};

struct DenseHead {
  Matrix W;     // 2 x d_L
  Vector bias;  // 2
};

// Optional per-column standardisation applied to raw features before the
// first layer. Empty means identity.
struct FeatureScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd inv_std;

  bool empty() const noexcept { return mean.size() == 0; }
  Embeddings apply(const Eigen::Ref<const Embeddings>& x) const;
  static FeatureScaler fit(const FeatureMatrix& features, std::span<const NodeId> rows);
};

struct SageModel {
  std::vector<SageLayer> layers;
  DenseHead head;
  FeatureScaler scaler;
  std::uint64_t schema_fingerprint = 0;
  double threshold = 0.5;  // tuned decision threshold on the Trojan probability

  std::size_t input_width() const noexcept;
  std::vector<std::size_t> layer_widths() const;  // input width, then each layer's output
  std::size_t num_parameters() const noexcept;

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero head bias.
  static SageModel initialize(std::size_t input_width, std::span<const std::size_t> hidden,
                              std::uint64_t schema_fingerprint, Rng& rng);
};

struct ModelGradients {
  std::vector<SageLayer> layers;
  DenseHead head;

  static ModelGradients zeros_like(const SageModel& model);
};

// Graph the network runs on. `edge_weights` (per adjacency entry) defaults to
// 1; `divisors` (per node) defaults to the node's degree in `adjacency`.
struct GraphView {
  const Adjacency* adjacency = nullptr;
  std::span<const double> edge_weights{};
  std::span<const double> divisors{};
};

// a_u = sum_v w_uv h_v / divisor_u; isolated nodes (or zero divisor) get 0.
Embeddings aggregate_mean(const Embeddings& h, const GraphView& view);

Embeddings layer_forward(const SageLayer& layer, const Embeddings& h_prev, const GraphView& view);

// Class probabilities, one row per node: column 0 benign, column 1 Trojan.
Embeddings forward(const SageModel& model, const GraphView& view, const FeatureMatrix& features);

Embeddings softmax_rows(const Embeddings& logits);

struct LossResult {
  double loss = 0.0;
  ModelGradients gradients;
};

// loss = sum_u -log(max(p_u[y_u], 1e-12)) / lambda_u with exact gradients for
// every parameter. `lambda` may be empty (all ones).
LossResult loss_and_gradients(const SageModel& model, const GraphView& view,
                              const FeatureMatrix& features, std::span<const std::uint8_t> labels,
                              std::span<const double> lambda = {});

// Loss only (same definition as above); used by finite-difference checks.
double loss_value(const SageModel& model, const GraphView& view, const FeatureMatrix& features,
                  std::span<const std::uint8_t> labels, std::span<const double> lambda = {});

// theta <- theta - learning_rate * grad
void sgd_step(SageModel& model, const ModelGradients& gradients, double learning_rate);

// Rounds every parameter to the nearest float32, matching checkpoint storage.
void round_to_float(SageModel& model);

// Visits every parameter tensor in checkpoint order: layer{i}.W, layer{i}.B,
// ..., head.W, head.bias.
template <class Model, class Fn>
void for_each_parameter(Model& model, Fn&& fn) {
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    fn("layer" + std::to_string(i) + ".W", model.layers[i].W);
    fn("layer" + std::to_string(i) + ".B", model.layers[i].B);
  }
  fn(std::string("head.W"), model.head.W);
  fn(std::string("head.bias"), model.head.bias);
}

}  // namespace tskit
