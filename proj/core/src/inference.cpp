#include "tskit/inference.hpp"

#include <algorithm>
#include <set>

#include "tskit/error.hpp"
#include "tskit/log.hpp"

namespace tskit {

void ThresholdConfig::validate() const {
  if (steps == 0) throw Error(ErrorCode::InvalidConfig, "threshold steps must be >= 1");
  if (!(lower >= 0.0) || !(upper <= 1.0) || !(lower < upper)) {
    throw Error(ErrorCode::InvalidConfig, "threshold bounds must satisfy 0 <= lower < upper <= 1");
  }
}

bool NodeFilter::accepts(const GateGraph& graph, NodeId u) const {
  if (role && graph.roles[u] != *role) return false;
  if (design && graph.origin[u].design != *design) return false;
  return true;
}

std::vector<double> trojan_probabilities(const SageModel& model, const GateGraph& graph,
                                         std::span<const NodeId> nodes) {
  if (model.schema_fingerprint != graph.schema.fingerprint()) {
    throw Error(ErrorCode::SchemaMismatch, "model was trained with a different feature schema");
  }
  if (nodes.empty()) return {};
  std::set<std::string> designs;
  for (NodeId u : nodes) designs.insert(graph.origin[u].design);
  std::vector<NodeId> closure;
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    if (designs.count(graph.origin[u].design)) closure.push_back(u);
  }
  const Adjacency adj = induced_adjacency(graph.adjacency, closure);
  FeatureMatrix x(static_cast<Eigen::Index>(closure.size()), graph.features.cols());
  for (std::size_t i = 0; i < closure.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = graph.features.row(closure[i]);
  const Embeddings probs = forward(model, GraphView{&adj}, x);

  std::vector<double> out;
  out.reserve(nodes.size());
  for (NodeId u : nodes) {
    const auto local = std::lower_bound(closure.begin(), closure.end(), u) - closure.begin();
    out.push_back(probs(local, kTrojanClass));
  }
  return out;
}

std::vector<Prediction> predict(const SageModel& model, const GateGraph& graph, double threshold,
                                const NodeFilter& filter) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorCode::InvalidConfig, "threshold must lie in [0, 1]");
  std::vector<NodeId> nodes;
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    if (filter.accepts(graph, u)) nodes.push_back(u);
  }
  const auto probs = trojan_probabilities(model, graph, nodes);
  std::vector<Prediction> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId u = nodes[i];
    out.push_back({u, graph.origin[u].design, graph.origin[u].instance, probs[i], probs[i] >= threshold});
  }
  return out;
}

ThresholdResult tune_threshold(std::span<const double> p_trojan, std::span<const std::uint8_t> labels,
                               const ThresholdConfig& config) {
  config.validate();
  if (p_trojan.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "probability/label count mismatch");
  std::vector<double> positives, negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? positives : negatives).push_back(p_trojan[i]);
  std::sort(positives.begin(), positives.end());
  std::sort(negatives.begin(), negatives.end());

  auto at_or_above = [](const std::vector<double>& sorted, double th) {
    return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), th));
  };

  ThresholdResult result;
  result.single_class = positives.empty() || negatives.empty();
  result.sweep.reserve(config.steps);
  bool have_best = false;
  for (std::size_t k = 1; k <= config.steps; ++k) {
    SweepPoint pt;
    pt.threshold = config.candidate(k);
    if (!positives.empty()) {
      pt.tpr = static_cast<double>(at_or_above(positives, pt.threshold)) / static_cast<double>(positives.size());
    }
    if (!negatives.empty()) {
      pt.tnr = static_cast<double>(negatives.size() - at_or_above(negatives, pt.threshold)) /
               static_cast<double>(negatives.size());
    }
    pt.score = (pt.tpr + pt.tnr) / 2.0;
    if (!result.single_class && (!have_best || pt.score > result.score)) {
      result.threshold = pt.threshold;
      result.score = pt.score;
      have_best = true;
    }
    result.sweep.push_back(pt);
  }
  if (result.single_class) {
    log_warning("validation set lacks one class; threshold defaults to the first candidate");
    result.threshold = result.sweep.front().threshold;
    result.score = result.sweep.front().score;
  }
  return result;
}

ThresholdResult tune_threshold(const SageModel& model, const GateGraph& graph,
                               std::span<const NodeId> validation_nodes, const ThresholdConfig& config) {
  const auto probs = trojan_probabilities(model, graph, validation_nodes);
  std::vector<std::uint8_t> labels;
  labels.reserve(validation_nodes.size());
  for (NodeId u : validation_nodes) labels.push_back(graph.labels[u]);
  return tune_threshold(probs, labels, config);
}

}  // namespace tskit
