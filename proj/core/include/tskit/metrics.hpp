#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tskit/inference.hpp"

namespace tskit {

// Positive = Trojan gate.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  ConfusionCounts counts;
  std::optional<double> tpr;  // empty when no Trojan gate was scored
  std::optional<double> tnr;  // empty when no benign gate was scored

  // Mean of the defined rates; empty if neither is defined.
  std::optional<double> balanced() const;
};

Metrics metrics_from_counts(const ConfusionCounts& counts);

// `labels` is indexed by node id; a prediction for a node outside it raises
// MissingLabel.
Metrics compute_metrics(std::span<const Prediction> predictions, std::span<const std::uint8_t> labels);

// Parallel decision/label vectors; a length mismatch raises MissingLabel.
Metrics compute_metrics(const std::vector<bool>& decisions, std::span<const std::uint8_t> labels);

// Columns node_id, design, instance, p_ht, decision. Probabilities are written
// in shortest round-trip form, so a reread file scores identically.
void write_predictions_csv(std::ostream& out, std::span<const Prediction> predictions);
void save_predictions_csv(const std::filesystem::path& path, std::span<const Prediction> predictions);
std::vector<Prediction> read_predictions_csv(std::istream& in);
std::vector<Prediction> load_predictions_csv(const std::filesystem::path& path);

}  // namespace tskit
