#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tskit/gate_graph.hpp"
#include "tskit/inference.hpp"
#include "tskit/sage_model.hpp"
#include "tskit/sampler.hpp"

namespace tskit {

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t minibatches_per_epoch = 20;
  double learning_rate = 0.1;
  SamplerConfig sampler;  // rng_seed is derived from `seed` by the trainer
  std::vector<std::size_t> hidden{256, 256};
  std::uint64_t seed = 0;
  std::size_t patience = 20;  // epochs without validation improvement before stopping
  bool standardize = false;   // fit a train-split feature scaler into the model
  ThresholdConfig threshold;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double validation_score = 0.0;
  double threshold = 0.0;
  double seconds = 0.0;
};

struct TrainRecord {
  std::vector<double> minibatch_losses;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = the initial model
  double best_score = 0.0;
  // Audit counters: rows gathered into a gradient computation whose node is
  // not train-role, and the subset of those that are test-role.
  std::size_t non_train_touches = 0;
  std::size_t test_node_touches = 0;
  SamplerConfig sampler;  // as resolved for this run
};

struct TrainResult {
  SageModel model;
  TrainRecord record;
};

struct TrainEvent {
  enum class Kind { Minibatch, Epoch } kind = Kind::Minibatch;
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
  std::size_t minibatch = 0;
  double loss = 0.0;
  std::size_t subgraph_nodes = 0;
  double validation_score = 0.0;
  double threshold = 0.0;
};

using TrainObserver = std::function<void(const TrainEvent&)>;

// Random-walk subgraph training: estimate the normalisation table, then per
// minibatch sample a train-only subgraph, run the network on it with
// alpha-weighted aggregation, back-propagate the lambda-weighted loss and
// take an SGD step. After each epoch the model is scored on the validation
// nodes (full-graph forward, tuned threshold); the best snapshot is returned
// with its threshold. Ties keep the earliest epoch.
TrainResult train(const GateGraph& graph, const TrainConfig& config, const TrainObserver& observer = {});

// Same, with an explicit validation node set (used when validation and test
// coincide).
TrainResult train(const GateGraph& graph, const TrainConfig& config, std::span<const NodeId> validation_nodes,
                  const TrainObserver& observer = {});

struct SeedRun {
  std::uint64_t seed = 0;
  double validation_score = 0.0;
  std::size_t best_epoch = 0;
  std::size_t non_train_touches = 0;
  std::size_t test_node_touches = 0;
};

struct SeedSelection {
  TrainResult best;
  std::uint64_t seed = 0;
  std::vector<SeedRun> runs;  // in the order of `seeds`
};

// Trains one model per seed and keeps the highest validation score; ties go
// to the lowest seed. `jobs` > 1 trains seeds on that many threads.
SeedSelection run_seeds(const GateGraph& graph, const TrainConfig& config, std::span<const std::uint64_t> seeds,
                        std::span<const NodeId> validation_nodes, std::size_t jobs = 1,
                        const TrainObserver& observer = {});

SeedSelection run_seeds(const GateGraph& graph, const TrainConfig& config, std::span<const std::uint64_t> seeds,
                        std::size_t jobs = 1, const TrainObserver& observer = {});

}  // namespace tskit
