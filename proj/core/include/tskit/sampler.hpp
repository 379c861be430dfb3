#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tskit/gate_graph.hpp"
#include "tskit/random.hpp"

namespace tskit {

struct SamplerConfig {
  std::size_t num_roots = 0;  // 0 = min(3000, |train| / 2), at least 1
  std::size_t walk_length = 2;
  std::uint64_t rng_seed = 0;
  std::size_t presample_rounds = 50;

  // Fills in the automatic root count and validates; throws InvalidConfig.
  SamplerConfig resolved(std::size_t train_nodes) const;
};

// Node-induced training subgraph. Local ids index `node_ids`.
struct Subgraph {
  std::vector<NodeId> node_ids;         // sorted global ids
  Adjacency local;                      // induced adjacency
  std::vector<std::size_t> edge_entry;  // per local entry: index into the global CSR targets
  std::vector<double> alpha;            // per local entry, filled by apply_normalization
  std::vector<double> lambda;           // per local node, filled by apply_normalization
  std::vector<double> full_degree;      // per local node: train-neighbour count in the full graph
};

// Pre-sampling counts: C_v per node and C_{u,v} per adjacency entry over M
// rounds, with +1 smoothing on every count.
class NormTable {
 public:
  NormTable() = default;
  NormTable(std::size_t rounds, std::vector<std::uint32_t> node_counts,
            std::vector<std::uint32_t> edge_counts);

  std::size_t rounds() const noexcept { return rounds_; }
  std::uint32_t node_count(NodeId v) const { return node_counts_[v]; }
  std::uint32_t edge_count(std::size_t entry) const { return edge_counts_[entry]; }

  // (C_v + 1) / (M + 1)
  double lambda(NodeId v) const;
  // (C_{u,v} + 1) / (C_u + 1) where `entry` is the CSR entry u -> v.
  double alpha(NodeId u, std::size_t entry) const;

 private:
  std::size_t rounds_ = 0;
  std::vector<std::uint32_t> node_counts_;
  std::vector<std::uint32_t> edge_counts_;
};

// Random-walk sampler restricted to train-role nodes: walks never step onto a
// validation or test node, so sampled subgraphs contain training data only.
class RandomWalkSampler {
 public:
  RandomWalkSampler(const GateGraph& graph, const SamplerConfig& config);

  const SamplerConfig& config() const noexcept { return config_; }
  const std::vector<NodeId>& train_nodes() const noexcept { return train_nodes_; }

  // Draws `num_roots` roots uniformly (with replacement) from the train
  // nodes, walks `walk_length` steps from each and returns the subgraph
  // induced by every visited node. alpha/lambda are left empty.
  Subgraph sample(Rng& rng) const;

  // Runs `presample_rounds` rounds; round r uses seed derive_seed(rng_seed, r).
  NormTable estimate_normalization() const;

  void apply_normalization(const NormTable& table, Subgraph& subgraph) const;

 private:
  const GateGraph& graph_;
  SamplerConfig config_;
  std::vector<NodeId> train_nodes_;
  std::vector<std::vector<NodeId>> train_neighbors_;
};

Subgraph sample_subgraph(const GateGraph& graph, const SamplerConfig& config, Rng& rng);
NormTable estimate_normalization(const GateGraph& graph, const SamplerConfig& config);

}  // namespace tskit
