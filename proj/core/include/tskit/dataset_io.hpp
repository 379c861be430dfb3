#pragma once

#include <filesystem>

#include "tskit/gate_graph.hpp"

namespace tskit {

// Dataset directory layout:
//   adj.txt     one undirected edge per line, "u v" with u < v
//   feats.csv   header row, then node id followed by F feature columns
//   labels.txt  "node label" per line (0/1)
//   roles.json  {"train": [...], "validation": [...], "test": [...]}
//   nodes.tsv   node id, design, instance (tab separated, header row)
//   schema.json the FeatureSchema the features were built with
void save_dataset(const GateGraph& graph, const std::filesystem::path& dir);
GateGraph load_dataset(const std::filesystem::path& dir);

}  // namespace tskit
