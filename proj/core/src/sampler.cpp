#include "tskit/sampler.hpp"

#include <algorithm>

#include "tskit/error.hpp"

namespace tskit {

SamplerConfig SamplerConfig::resolved(std::size_t train_nodes) const {
  SamplerConfig c = *this;
  if (c.num_roots == 0) c.num_roots = std::max<std::size_t>(1, std::min<std::size_t>(3000, train_nodes / 2));
  if (c.walk_length < 1) throw Error(ErrorCode::InvalidConfig, "walk_length must be >= 1");
  if (c.presample_rounds < 1) throw Error(ErrorCode::InvalidConfig, "presample_rounds must be >= 1");
  return c;
}

NormTable::NormTable(std::size_t rounds, std::vector<std::uint32_t> node_counts,
                     std::vector<std::uint32_t> edge_counts)
    : rounds_(rounds), node_counts_(std::move(node_counts)), edge_counts_(std::move(edge_counts)) {}

double NormTable::lambda(NodeId v) const {
  return (static_cast<double>(node_counts_[v]) + 1.0) / (static_cast<double>(rounds_) + 1.0);
}

double NormTable::alpha(NodeId u, std::size_t entry) const {
  return (static_cast<double>(edge_counts_[entry]) + 1.0) /
         (static_cast<double>(node_counts_[u]) + 1.0);
}

RandomWalkSampler::RandomWalkSampler(const GateGraph& graph, const SamplerConfig& config)
    : graph_(graph) {
  train_nodes_ = graph.nodes_with_role(Role::Train);
  if (train_nodes_.empty()) throw Error(ErrorCode::NoTrainNodes, "graph has no train-role nodes");
  config_ = config.resolved(train_nodes_.size());
  train_neighbors_.resize(graph.num_nodes());
  for (NodeId u : train_nodes_) {
    for (NodeId v : graph.adjacency.neighbors(u)) {
      if (graph.roles[v] == Role::Train) train_neighbors_[u].push_back(v);
    }
  }
}

Subgraph RandomWalkSampler::sample(Rng& rng) const {
  std::vector<NodeId> visited;
  visited.reserve(config_.num_roots * (config_.walk_length + 1));
  for (std::size_t r = 0; r < config_.num_roots; ++r) {
    NodeId cur = train_nodes_[uniform_index(rng, train_nodes_.size())];
    visited.push_back(cur);
    for (std::size_t step = 0; step < config_.walk_length; ++step) {
      const auto& next = train_neighbors_[cur];
      if (next.empty()) break;
      cur = next[uniform_index(rng, next.size())];
      visited.push_back(cur);
    }
  }
  std::sort(visited.begin(), visited.end());
  visited.erase(std::unique(visited.begin(), visited.end()), visited.end());

  Subgraph sg;
  sg.node_ids = std::move(visited);
  const auto& ids = sg.node_ids;
  sg.local.offsets.assign(1, 0);
  sg.full_degree.reserve(ids.size());
  for (NodeId u : ids) {
    const std::size_t begin = graph_.adjacency.offsets[u];
    const auto nbrs = graph_.adjacency.neighbors(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const auto it = std::lower_bound(ids.begin(), ids.end(), nbrs[k]);
      if (it == ids.end() || *it != nbrs[k]) continue;
      sg.local.targets.push_back(static_cast<NodeId>(it - ids.begin()));
      sg.edge_entry.push_back(begin + k);
    }
    sg.local.offsets.push_back(sg.local.targets.size());
    sg.full_degree.push_back(static_cast<double>(train_neighbors_[u].size()));
  }
  return sg;
}

NormTable RandomWalkSampler::estimate_normalization() const {
  std::vector<std::uint32_t> node_counts(graph_.num_nodes(), 0);
  std::vector<std::uint32_t> edge_counts(graph_.adjacency.num_entries(), 0);
  for (std::size_t round = 0; round < config_.presample_rounds; ++round) {
    Rng rng(derive_seed(config_.rng_seed, round));
    const Subgraph sg = sample(rng);
    for (NodeId v : sg.node_ids) ++node_counts[v];
    for (std::size_t e : sg.edge_entry) ++edge_counts[e];
  }
  return NormTable(config_.presample_rounds, std::move(node_counts), std::move(edge_counts));
}

void RandomWalkSampler::apply_normalization(const NormTable& table, Subgraph& sg) const {
  sg.lambda.resize(sg.node_ids.size());
  sg.alpha.resize(sg.edge_entry.size());
  for (NodeId lu = 0; lu < sg.node_ids.size(); ++lu) {
    const NodeId u = sg.node_ids[lu];
    sg.lambda[lu] = table.lambda(u);
    for (std::size_t e = sg.local.offsets[lu]; e < sg.local.offsets[lu + 1]; ++e) {
      sg.alpha[e] = table.alpha(u, sg.edge_entry[e]);
    }
  }
}

Subgraph sample_subgraph(const GateGraph& graph, const SamplerConfig& config, Rng& rng) {
  return RandomWalkSampler(graph, config).sample(rng);
}

NormTable estimate_normalization(const GateGraph& graph, const SamplerConfig& config) {
  return RandomWalkSampler(graph, config).estimate_normalization();
}

}  // namespace tskit
