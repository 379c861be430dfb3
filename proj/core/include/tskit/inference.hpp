#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tskit/gate_graph.hpp"
#include "tskit/sage_model.hpp"

namespace tskit {

// Candidate thresholds lower + (upper - lower) * k / steps for k = 1..steps.
struct ThresholdConfig {
  double lower = 0.0;
  double upper = 0.5;
  std::size_t steps = 1000;

  double candidate(std::size_t k) const noexcept {
    return lower + (upper - lower) * static_cast<double>(k) / static_cast<double>(steps);
  }
  void validate() const;
};

struct Prediction {
  NodeId node = 0;
  std::string design;
  std::string instance;
  double p_trojan = 0.0;
  bool decision = false;  // p_trojan >= threshold
};

struct NodeFilter {
  std::optional<Role> role;
  std::optional<std::string> design;

  bool accepts(const GateGraph& graph, NodeId u) const;
};

// Trojan-class probability for each of `nodes`, computed by a forward pass
// over every design that contains one of them. Designs are disjoint
// components, so this equals the full-graph forward pass on those nodes.
std::vector<double> trojan_probabilities(const SageModel& model, const GateGraph& graph,
                                         std::span<const NodeId> nodes);

std::vector<Prediction> predict(const SageModel& model, const GateGraph& graph, double threshold,
                                const NodeFilter& filter = {});

struct SweepPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double tnr = 0.0;
  double score = 0.0;  // (tpr + tnr) / 2
};

struct ThresholdResult {
  double threshold = 0.0;
  double score = 0.0;
  bool single_class = false;
  std::vector<SweepPoint> sweep;
};

// Sweeps every candidate and returns the one maximising (TPR + TNR) / 2;
// ties go to the smallest threshold. A missing class contributes a rate of 0
// and yields the first candidate with a warning.
ThresholdResult tune_threshold(std::span<const double> p_trojan, std::span<const std::uint8_t> labels,
                               const ThresholdConfig& config = {});

ThresholdResult tune_threshold(const SageModel& model, const GateGraph& graph,
                               std::span<const NodeId> validation_nodes, const ThresholdConfig& config = {});

}  // namespace tskit
