#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tskit/feature_schema.hpp"

namespace tskit {

using NodeId = std::uint32_t;
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Role : std::uint8_t { Train, Validation, Test };

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view text) noexcept;

struct NodeOrigin {
  std::string design;
  std::string instance;
};

// Symmetric adjacency in compressed-row form; each neighbour list is sorted
// and free of duplicates and self-loops.
struct Adjacency {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;

  std::size_t num_nodes() const noexcept { return offsets.size() - 1; }
  std::size_t num_entries() const noexcept { return targets.size(); }
  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }
  std::size_t degree(NodeId u) const noexcept { return offsets[u + 1] - offsets[u]; }

  // Builds from per-node neighbour lists (sorted and deduplicated here).
  static Adjacency from_lists(std::vector<std::vector<NodeId>> lists);
  bool is_symmetric() const;
  bool has_self_loops() const;
};

// Adjacency restricted to `nodes` (sorted global ids), renumbered to local
// positions in `nodes`.
Adjacency induced_adjacency(const Adjacency& adjacency, std::span<const NodeId> nodes);

// Disjoint union of every design's gate graph plus per-node attributes.
struct GateGraph {
  FeatureSchema schema;
  Adjacency adjacency;
  FeatureMatrix features;
  std::vector<std::uint8_t> labels;  // 1 = Trojan gate
  std::vector<Role> roles;
  std::vector<NodeOrigin> origin;

  std::size_t num_nodes() const noexcept { return roles.size(); }
  std::vector<NodeId> nodes_with_role(Role role) const;
  std::vector<NodeId> nodes_of_design(std::string_view design) const;
  // Design names in order of first appearance.
  std::vector<std::string> design_names() const;
};

}  // namespace tskit
