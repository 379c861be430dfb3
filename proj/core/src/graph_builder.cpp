#include "tskit/graph_builder.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "tskit/error.hpp"

namespace tskit {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Train: return "train";
    case Role::Validation: return "validation";
    case Role::Test: return "test";
  }
  return "?";
}

std::optional<Role> role_from_string(std::string_view text) noexcept {
  if (text == "train") return Role::Train;
  if (text == "validation" || text == "val") return Role::Validation;
  if (text == "test") return Role::Test;
  return std::nullopt;
}

Adjacency Adjacency::from_lists(std::vector<std::vector<NodeId>> lists) {
  Adjacency adj;
  adj.offsets.assign(1, 0);
  adj.offsets.reserve(lists.size() + 1);
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    adj.targets.insert(adj.targets.end(), l.begin(), l.end());
    adj.offsets.push_back(adj.targets.size());
  }
  return adj;
}

bool Adjacency::is_symmetric() const {
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      const auto back = neighbors(v);
      if (!std::binary_search(back.begin(), back.end(), u)) return false;
    }
  }
  return true;
}

bool Adjacency::has_self_loops() const {
  for (NodeId u = 0; u < num_nodes(); ++u) {
    const auto n = neighbors(u);
    if (std::binary_search(n.begin(), n.end(), u)) return true;
  }
  return false;
}

Adjacency induced_adjacency(const Adjacency& adjacency, std::span<const NodeId> nodes) {
  Adjacency out;
  out.offsets.reserve(nodes.size() + 1);
  for (NodeId u : nodes) {
    for (NodeId v : adjacency.neighbors(u)) {
      const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
      if (it != nodes.end() && *it == v) out.targets.push_back(static_cast<NodeId>(it - nodes.begin()));
    }
    out.offsets.push_back(out.targets.size());
  }
  return out;
}

std::vector<NodeId> GateGraph::nodes_with_role(Role role) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < roles.size(); ++u) {
    if (roles[u] == role) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> GateGraph::nodes_of_design(std::string_view design) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < origin.size(); ++u) {
    if (origin[u].design == design) out.push_back(u);
  }
  return out;
}

std::vector<std::string> GateGraph::design_names() const {
  std::vector<std::string> names;
  std::unordered_set<std::string_view> seen;
  for (const auto& o : origin) {
    if (seen.insert(o.design).second) names.push_back(o.design);
  }
  return names;
}

std::vector<std::uint32_t> bfs_distances(const std::vector<std::vector<NodeId>>& neighbors,
                                         std::span<const NodeId> sources) {
  std::vector<std::uint32_t> dist(neighbors.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (dist[s] == 0) {
      dist[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : neighbors[u]) {
      if (dist[v] == 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

Connectivity analyze_connectivity(const Netlist& netlist) {
  const std::size_t n = netlist.cells.size();
  std::unordered_map<std::string, std::vector<NodeId>> drivers, sinks;
  std::unordered_map<std::string, std::uint32_t> sink_pins;
  for (NodeId c = 0; c < n; ++c) {
    const Cell& cell = netlist.cells[c];
    for (const auto& p : cell.output_pins) drivers[p.net].push_back(c);
    for (const auto& p : cell.input_pins) {
      sinks[p.net].push_back(c);
      ++sink_pins[p.net];
    }
  }

  Connectivity conn;
  conn.neighbors.assign(n, {});
  conn.in_degree.assign(n, 0);
  conn.out_degree.assign(n, 0);
  for (const auto& [net, ds] : drivers) {
    const auto it = sinks.find(net);
    if (it == sinks.end()) continue;
    for (NodeId d : ds) {
      for (NodeId s : it->second) {
        if (d == s) continue;
        conn.neighbors[d].push_back(s);
        conn.neighbors[s].push_back(d);
      }
    }
  }
  for (auto& l : conn.neighbors) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }

  const std::unordered_set<std::string> pis(netlist.primary_inputs.begin(), netlist.primary_inputs.end());
  const std::unordered_set<std::string> pos(netlist.primary_outputs.begin(), netlist.primary_outputs.end());
  std::vector<NodeId> on_pi, on_po;
  for (NodeId c = 0; c < n; ++c) {
    const Cell& cell = netlist.cells[c];
    conn.in_degree[c] = static_cast<std::uint32_t>(cell.input_pins.size());
    bool touches_pi = false, touches_po = false;
    for (const auto* list : {&cell.input_pins, &cell.output_pins}) {
      for (const auto& p : *list) {
        touches_pi = touches_pi || pis.count(p.net);
        touches_po = touches_po || pos.count(p.net);
      }
    }
    for (const auto& p : cell.output_pins) {
      if (const auto it = sink_pins.find(p.net); it != sink_pins.end()) conn.out_degree[c] += it->second;
    }
    if (touches_pi) on_pi.push_back(c);
    if (touches_po) on_po.push_back(c);
  }
  conn.dist_to_pi = bfs_distances(conn.neighbors, on_pi);
  conn.dist_to_po = bfs_distances(conn.neighbors, on_po);
  return conn;
}

namespace {

void fill_features(const Netlist& netlist, const Connectivity& conn, const FeatureSchema& schema,
                   FeatureMatrix& x, Eigen::Index row0) {
  for (std::size_t c = 0; c < netlist.cells.size(); ++c) {
    const Eigen::Index r = row0 + static_cast<Eigen::Index>(c);
    x(r, static_cast<Eigen::Index>(schema.family_slot(netlist.cells[c].family))) = 1.0;
    x(r, schema.scalar_column(FeatureSchema::kInDegree)) = conn.in_degree[c];
    x(r, schema.scalar_column(FeatureSchema::kOutDegree)) = conn.out_degree[c];
    x(r, schema.scalar_column(FeatureSchema::kDistToPI)) = conn.dist_to_pi[c];
    x(r, schema.scalar_column(FeatureSchema::kDistToPO)) = conn.dist_to_po[c];
  }
}

}  // namespace

FeatureMatrix extract_features(const Netlist& netlist, const FeatureSchema& schema) {
  schema.validate();
  const Connectivity conn = analyze_connectivity(netlist);
  FeatureMatrix x = FeatureMatrix::Zero(static_cast<Eigen::Index>(netlist.cells.size()),
                                        static_cast<Eigen::Index>(schema.width()));
  fill_features(netlist, conn, schema, x, 0);
  return x;
}

GateGraph build_graph(std::span<const DesignInput> designs, const FeatureSchema& schema,
                      const LabelRule& label_rule) {
  schema.validate();
  std::set<std::string> names;
  std::size_t total = 0;
  for (const auto& d : designs) {
    if (d.netlist->cells.empty()) {
      throw Error(ErrorCode::EmptyDesign, "design '" + d.netlist->name + "' has no cells");
    }
    if (!names.insert(d.netlist->name).second) {
      throw Error(ErrorCode::DuplicateDesign, "design '" + d.netlist->name + "' given twice");
    }
    total += d.netlist->cells.size();
  }

  GateGraph g;
  g.schema = schema;
  g.features = FeatureMatrix::Zero(static_cast<Eigen::Index>(total),
                                   static_cast<Eigen::Index>(schema.width()));
  g.labels.reserve(total);
  g.roles.reserve(total);
  g.origin.reserve(total);
  std::vector<std::vector<NodeId>> lists;
  lists.reserve(total);

  NodeId base = 0;
  for (const auto& d : designs) {
    const Netlist& nl = *d.netlist;
    const Connectivity conn = analyze_connectivity(nl);
    fill_features(nl, conn, schema, g.features, base);
    const auto labels = derive_labels(nl, label_rule);
    for (std::size_t c = 0; c < nl.cells.size(); ++c) {
      std::vector<NodeId> shifted = conn.neighbors[c];
      for (auto& v : shifted) v += base;
      lists.push_back(std::move(shifted));
      g.labels.push_back(labels[c]);
      g.roles.push_back(d.role);
      g.origin.push_back({nl.name, nl.cells[c].instance_name});
    }
    base += static_cast<NodeId>(nl.cells.size());
  }
  g.adjacency = Adjacency::from_lists(std::move(lists));
  return g;
}

}  // namespace tskit
