#include "tskit/sage_model.hpp"

#include <cmath>
#include <string>

#include "tskit/error.hpp"

namespace tskit {
namespace {

void check_view(const GraphView& view, Eigen::Index rows) {
  if (view.adjacency == nullptr) throw Error(ErrorCode::DimensionMismatch, "graph view has no adjacency");
  if (static_cast<Eigen::Index>(view.adjacency->num_nodes()) != rows) {
    throw Error(ErrorCode::DimensionMismatch,
                "adjacency has " + std::to_string(view.adjacency->num_nodes()) + " nodes, embeddings have " +
                    std::to_string(rows) + " rows");
  }
  if (!view.edge_weights.empty() && view.edge_weights.size() != view.adjacency->num_entries()) {
    throw Error(ErrorCode::DimensionMismatch, "edge weight count does not match adjacency");
  }
  if (!view.divisors.empty() && static_cast<Eigen::Index>(view.divisors.size()) != rows) {
    throw Error(ErrorCode::DimensionMismatch, "divisor count does not match node count");
  }
}

// Coefficient of h_v in a_u for adjacency entry e of row u.
inline double coefficient(const GraphView& view, NodeId u, std::size_t e) {
  const double div = view.divisors.empty() ? static_cast<double>(view.adjacency->degree(u)) : view.divisors[u];
  if (div == 0.0) return 0.0;
  const double w = view.edge_weights.empty() ? 1.0 : view.edge_weights[e];
  return w / div;
}

// a = P h, with P the (weighted) mean-aggregation operator.
Embeddings apply_aggregation(const Embeddings& h, const GraphView& view) {
  const Adjacency& adj = *view.adjacency;
  Embeddings a = Embeddings::Zero(h.rows(), h.cols());
  for (NodeId u = 0; u < adj.num_nodes(); ++u) {
    for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
      a.row(u).noalias() += coefficient(view, u, e) * h.row(adj.targets[e]);
    }
  }
  return a;
}

// g_h += P^T g_a
void apply_aggregation_transpose(const Embeddings& grad_a, const GraphView& view, Embeddings& grad_h) {
  const Adjacency& adj = *view.adjacency;
  for (NodeId u = 0; u < adj.num_nodes(); ++u) {
    for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
      grad_h.row(adj.targets[e]).noalias() += coefficient(view, u, e) * grad_a.row(u);
    }
  }
}

struct LayerCache {
  Embeddings input;
  Embeddings aggregate;
  Embeddings pre_activation;
};

struct ForwardPass {
  std::vector<LayerCache> layers;
  Embeddings last;
  Embeddings probabilities;
};

Embeddings prepare_input(const SageModel& model, const FeatureMatrix& features) {
  if (static_cast<std::size_t>(features.cols()) != model.input_width()) {
    throw Error(ErrorCode::SchemaMismatch, "feature width " + std::to_string(features.cols()) +
                                               " does not match model input width " +
                                               std::to_string(model.input_width()));
  }
  return model.scaler.empty() ? Embeddings(features) : model.scaler.apply(features);
}

ForwardPass run_forward(const SageModel& model, const GraphView& view, const FeatureMatrix& features,
                        bool keep_cache) {
  check_view(view, features.rows());
  ForwardPass pass;
  Embeddings h = prepare_input(model, features);
  for (const auto& layer : model.layers) {
    LayerCache cache;
    cache.aggregate = apply_aggregation(h, view);
    cache.pre_activation = cache.aggregate * layer.W.transpose();
    cache.pre_activation.noalias() += h * layer.B.transpose();
    Embeddings next = cache.pre_activation.cwiseMax(0.0);
    if (keep_cache) {
      cache.input = std::move(h);
      pass.layers.push_back(std::move(cache));
    }
    h = std::move(next);
  }
  Embeddings logits = h * model.head.W.transpose();
  logits.rowwise() += model.head.bias.transpose();
  pass.probabilities = softmax_rows(logits);
  pass.last = std::move(h);
  return pass;
}

void check_labels(std::span<const std::uint8_t> labels, std::span<const double> lambda, Eigen::Index rows) {
  if (static_cast<Eigen::Index>(labels.size()) != rows) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match node count");
  }
  if (!lambda.empty() && static_cast<Eigen::Index>(lambda.size()) != rows) {
    throw Error(ErrorCode::DimensionMismatch, "lambda count does not match node count");
  }
}

}  // namespace

Embeddings FeatureScaler::apply(const Eigen::Ref<const Embeddings>& x) const {
  Embeddings out = x.rowwise() - mean;
  out.array().rowwise() *= inv_std.array();
  return out;
}

FeatureScaler FeatureScaler::fit(const FeatureMatrix& features, std::span<const NodeId> rows) {
  FeatureScaler s;
  const Eigen::Index cols = features.cols();
  s.mean = Eigen::RowVectorXd::Zero(cols);
  s.inv_std = Eigen::RowVectorXd::Ones(cols);
  if (rows.empty()) return s;
  for (NodeId r : rows) s.mean += features.row(r);
  s.mean /= static_cast<double>(rows.size());
  Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(cols);
  for (NodeId r : rows) var += (features.row(r) - s.mean).array().square().matrix();
  var /= static_cast<double>(rows.size());
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double sd = std::sqrt(var[c]);
    s.inv_std[c] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return s;
}

std::size_t SageModel::input_width() const noexcept {
  if (!layers.empty()) return static_cast<std::size_t>(layers.front().in_width());
  return static_cast<std::size_t>(head.W.cols());
}

std::vector<std::size_t> SageModel::layer_widths() const {
  std::vector<std::size_t> widths{input_width()};
  for (const auto& l : layers) widths.push_back(static_cast<std::size_t>(l.out_width()));
  return widths;
}

std::size_t SageModel::num_parameters() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.W.size() + l.B.size());
  return n + static_cast<std::size_t>(head.W.size() + head.bias.size());
}

SageModel SageModel::initialize(std::size_t input_width, std::span<const std::size_t> hidden,
                                std::uint64_t schema_fingerprint, Rng& rng) {
  if (input_width == 0) throw Error(ErrorCode::InvalidConfig, "input width must be positive");
  auto glorot = [&rng](Eigen::Index rows, Eigen::Index cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = (2.0 * uniform_unit(rng) - 1.0) * limit;
    }
    return m;
  };
  SageModel model;
  model.schema_fingerprint = schema_fingerprint;
  auto d_in = static_cast<Eigen::Index>(input_width);
  for (std::size_t width : hidden) {
    if (width == 0) throw Error(ErrorCode::InvalidConfig, "hidden width must be positive");
    const auto d_out = static_cast<Eigen::Index>(width);
    SageLayer layer;
    layer.W = glorot(d_out, d_in);
    layer.B = glorot(d_out, d_in);
    model.layers.push_back(std::move(layer));
    d_in = d_out;
  }
  model.head.W = glorot(2, d_in);
  model.head.bias = Vector::Zero(2);
  return model;
}

ModelGradients ModelGradients::zeros_like(const SageModel& model) {
  ModelGradients g;
  for (const auto& l : model.layers) {
    g.layers.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Matrix::Zero(l.B.rows(), l.B.cols())});
  }
  g.head.W = Matrix::Zero(model.head.W.rows(), model.head.W.cols());
  g.head.bias = Vector::Zero(model.head.bias.size());
  return g;
}

Embeddings aggregate_mean(const Embeddings& h, const GraphView& view) {
  check_view(view, h.rows());
  return apply_aggregation(h, view);
}

Embeddings layer_forward(const SageLayer& layer, const Embeddings& h_prev, const GraphView& view) {
  check_view(view, h_prev.rows());
  if (h_prev.cols() != layer.in_width() || layer.B.cols() != layer.in_width() ||
      layer.B.rows() != layer.out_width()) {
    throw Error(ErrorCode::DimensionMismatch, "layer weights do not match embedding width");
  }
  Embeddings z = apply_aggregation(h_prev, view) * layer.W.transpose();
  z.noalias() += h_prev * layer.B.transpose();
  return z.cwiseMax(0.0);
}

Embeddings softmax_rows(const Embeddings& logits) {
  Embeddings p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - m).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

Embeddings forward(const SageModel& model, const GraphView& view, const FeatureMatrix& features) {
  return run_forward(model, view, features, false).probabilities;
}

double loss_value(const SageModel& model, const GraphView& view, const FeatureMatrix& features,
                  std::span<const std::uint8_t> labels, std::span<const double> lambda) {
  check_labels(labels, lambda, features.rows());
  const Embeddings p = forward(model, view, features);
  double loss = 0.0;
  for (Eigen::Index u = 0; u < p.rows(); ++u) {
    const double scale = lambda.empty() ? 1.0 : lambda[u];
    loss -= std::log(std::max(p(u, labels[u] ? kTrojanClass : kBenignClass), kProbabilityFloor)) / scale;
  }
  return loss;
}

LossResult loss_and_gradients(const SageModel& model, const GraphView& view, const FeatureMatrix& features,
                              std::span<const std::uint8_t> labels, std::span<const double> lambda) {
  check_labels(labels, lambda, features.rows());
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidConfig, "lambda must be positive and finite");
  }
  ForwardPass pass = run_forward(model, view, features, true);
  const Embeddings& p = pass.probabilities;

  LossResult result;
  result.gradients = ModelGradients::zeros_like(model);
  Embeddings grad_logits = Embeddings::Zero(p.rows(), p.cols());
  for (Eigen::Index u = 0; u < p.rows(); ++u) {
    const int y = labels[u] ? kTrojanClass : kBenignClass;
    const double scale = lambda.empty() ? 1.0 : lambda[u];
    const double py = p(u, y);
    if (py < kProbabilityFloor) {
      // clamped: the loss term is locally constant
      result.loss -= std::log(kProbabilityFloor) / scale;
      continue;
    }
    result.loss -= std::log(py) / scale;
    grad_logits.row(u) = p.row(u) / scale;
    grad_logits(u, y) -= 1.0 / scale;
  }
  if (!std::isfinite(result.loss)) throw Error(ErrorCode::NonFiniteLoss, "loss is not finite");

  auto& g = result.gradients;
  g.head.W.noalias() = grad_logits.transpose() * pass.last;
  g.head.bias = grad_logits.colwise().sum().transpose();
  Embeddings grad_h = grad_logits * model.head.W;

  for (std::size_t i = model.layers.size(); i-- > 0;) {
    const SageLayer& layer = model.layers[i];
    const LayerCache& cache = pass.layers[i];
    Embeddings grad_z = (cache.pre_activation.array() > 0.0).select(grad_h, 0.0);
    g.layers[i].W.noalias() = grad_z.transpose() * cache.aggregate;
    g.layers[i].B.noalias() = grad_z.transpose() * cache.input;
    if (i == 0) break;
    const Embeddings grad_a = grad_z * layer.W;
    grad_h = grad_z * layer.B;
    apply_aggregation_transpose(grad_a, view, grad_h);
  }
  return result;
}

void sgd_step(SageModel& model, const ModelGradients& gradients, double learning_rate) {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
  if (gradients.layers.size() != model.layers.size()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient layer count does not match model");
  }
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    model.layers[i].W -= learning_rate * gradients.layers[i].W;
    model.layers[i].B -= learning_rate * gradients.layers[i].B;
  }
  model.head.W -= learning_rate * gradients.head.W;
  model.head.bias -= learning_rate * gradients.head.bias;
}

void round_to_float(SageModel& model) {
  for_each_parameter(model, [](const std::string&, auto& tensor) {
    for (Eigen::Index k = 0; k < tensor.size(); ++k) {
      tensor.data()[k] = static_cast<double>(static_cast<float>(tensor.data()[k]));
    }
  });
}

}  // namespace tskit
