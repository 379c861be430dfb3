#pragma once

// Small hand-built graphs and netlists shared by several test files.

#include <string>
#include <utility>
#include <vector>

#include "tskit/feature_schema.hpp"
#include "tskit/gate_graph.hpp"
#include "tskit/netlist.hpp"

namespace toy {

using tskit::NodeId;

// Undirected graph from an edge list; every node gets `width` zero features,
// role Train, label 0 and origin ("toy", "n<i>").
inline tskit::GateGraph graph_from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                                         std::size_t width = 1) {
  std::vector<std::vector<NodeId>> lists(n);
  for (auto [u, v] : edges) {
    lists[u].push_back(v);
    lists[v].push_back(u);
  }
  tskit::GateGraph g;
  g.schema = tskit::FeatureSchema::default_schema();
  g.adjacency = tskit::Adjacency::from_lists(std::move(lists));
  g.features = tskit::FeatureMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  g.labels.assign(n, 0);
  g.roles.assign(n, tskit::Role::Train);
  for (std::size_t i = 0; i < n; ++i) g.origin.push_back({"toy", "n" + std::to_string(i)});
  return g;
}

inline tskit::Cell gate(std::string name, std::string type, std::string family,
                        std::vector<std::pair<std::string, std::string>> ins,
                        std::vector<std::pair<std::string, std::string>> outs) {
  tskit::Cell c;
  c.instance_name = std::move(name);
  c.cell_type = std::move(type);
  c.family = std::move(family);
  for (auto& [p, n] : ins) c.input_pins.push_back({p, n});
  for (auto& [p, n] : outs) c.output_pins.push_back({p, n});
  return c;
}

// Five-gate design, two of them Trojan XNORs:
//   a,b -> u_and -> n1 -> u_inv -> y
//   a,n1 -> Trojan_x0 -> t0 ; b,t0 -> Trojan_x1 -> t1 ; t1 -> u_buf -> z
inline tskit::Netlist small_design(const std::string& name) {
  tskit::Netlist n;
  n.name = name;
  n.nets = {"a", "b", "y", "z", "n1", "t0", "t1"};
  n.primary_inputs = {"a", "b"};
  n.primary_outputs = {"y", "z"};
  n.cells.push_back(gate("u_and", "AND2X1", "AND", {{"A", "a"}, {"B", "b"}}, {{"Y", "n1"}}));
  n.cells.push_back(gate("u_inv", "INVX1", "INV", {{"A", "n1"}}, {{"Y", "y"}}));
  n.cells.push_back(gate("Trojan_x0", "XNOR2X1", "XNOR", {{"A", "a"}, {"B", "n1"}}, {{"Y", "t0"}}));
  n.cells.push_back(gate("Trojan_x1", "XNOR2X1", "XNOR", {{"A", "b"}, {"B", "t0"}}, {{"Y", "t1"}}));
  n.cells.push_back(gate("u_buf", "BUFX2", "BUF", {{"A", "t1"}}, {{"Y", "z"}}));
  return n;
}

// Ten gates on a path 0-1-...-9 with the default schema. Nodes 2 and 7 are
// XNOR Trojans; every benign gate is AND/OR/INV. Nodes 0..5 train, 6..9
// validate, so each split holds one Trojan.
inline tskit::GateGraph planted_graph() {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < 10; ++u) edges.emplace_back(u, u + 1);
  auto g = graph_from_edges(10, edges, tskit::FeatureSchema::default_schema().width());
  const char* benign[] = {"AND", "OR", "INV"};
  for (NodeId u = 0; u < 10; ++u) {
    const bool trojan = u == 2 || u == 7;
    g.labels[u] = trojan;
    g.features(u, static_cast<Eigen::Index>(g.schema.family_slot(trojan ? "XNOR" : benign[u % 3]))) = 1.0;
    g.features(u, static_cast<Eigen::Index>(g.schema.scalar_column(tskit::FeatureSchema::kInDegree))) = 1.0;
    g.features(u, static_cast<Eigen::Index>(g.schema.scalar_column(tskit::FeatureSchema::kOutDegree))) = 1.0;
    g.roles[u] = u < 6 ? tskit::Role::Train : tskit::Role::Validation;
  }
  return g;
}

}  // namespace toy
