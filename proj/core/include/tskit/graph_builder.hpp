#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tskit/gate_graph.hpp"
#include "tskit/labels.hpp"
#include "tskit/netlist.hpp"

namespace tskit {

// Directed connectivity facts of one netlist, indexed by cell position.
struct Connectivity {
  std::vector<std::vector<NodeId>> neighbors;  // undirected driver<->sink, sorted
  std::vector<std::uint32_t> in_degree;        // connected input pins
  std::vector<std::uint32_t> out_degree;       // sink pins fed by the cell's outputs
  std::vector<std::uint32_t> dist_to_pi;       // 1 = pin on a PI net, 0 = unreachable
  std::vector<std::uint32_t> dist_to_po;
};

// Undirected edges join each driver of a net to each sink of that net; sinks
// of a shared net are not joined to each other.
Connectivity analyze_connectivity(const Netlist& netlist);

// Multi-source BFS over `neighbors`: sources get distance 1, unreachable 0.
std::vector<std::uint32_t> bfs_distances(const std::vector<std::vector<NodeId>>& neighbors,
                                         std::span<const NodeId> sources);

FeatureMatrix extract_features(const Netlist& netlist, const FeatureSchema& schema);

struct DesignInput {
  const Netlist* netlist;
  Role role;
};

// Node ids follow input order, then cell order within each netlist.
GateGraph build_graph(std::span<const DesignInput> designs, const FeatureSchema& schema,
                      const LabelRule& label_rule);

}  // namespace tskit
