#pragma once

// Independent reference implementations used to derive expected values in
// tests. None of these share code with the library paths they check.

#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "tskit/gate_graph.hpp"
#include "tskit/netlist.hpp"
#include "tskit/random.hpp"
#include "tskit/sage_model.hpp"

namespace oracle {

using tskit::NodeId;

// Pairwise scan: u ~ v iff some net has an output pin of one and an input
// pin of the other (u != v).
std::vector<std::set<NodeId>> brute_force_adjacency(const tskit::Netlist& n);

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Floyd-Warshall hop counts; kInf when unreachable.
std::vector<std::vector<std::uint32_t>> all_pairs_shortest_paths(const std::vector<std::set<NodeId>>& adj);

// 1 + min hops to any gate touching a primary input (output) net; 0 if none
// is reachable.
std::vector<std::uint32_t> distances_to_ports(const tskit::Netlist& n,
                                              const std::vector<std::vector<std::uint32_t>>& apsp, bool inputs);

// Random structural netlist with up to `max_gates` cells: multi-fanout nets,
// occasional multiply-driven nets, self-feedback, dangling nets, inout ports
// and constant ties.
tskit::Netlist random_netlist(tskit::Rng& rng, std::size_t max_gates);

// Central differences of loss_value over every parameter, in the layout of
// ModelGradients.
tskit::ModelGradients numeric_gradients(const tskit::SageModel& model, const tskit::GraphView& view,
                                        const tskit::FeatureMatrix& x, std::span<const std::uint8_t> labels,
                                        std::span<const double> lambda, double eps);

// Class-balanced logistic regression on standardised features, full-batch
// gradient descent. Returns P(y = 1) for every row of `eval`.
struct Logistic {
  Eigen::VectorXd w;
  double b = 0.0;
  Eigen::RowVectorXd mean, scale;
  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};
Logistic fit_logistic(const tskit::FeatureMatrix& x, std::span<const std::uint8_t> y, std::size_t iterations,
                      double learning_rate);

// Exhaustive sweep over lower + (upper - lower) k / steps, k = 1..steps.
struct SweepOracle {
  double threshold = 0.0;
  double score = -1.0;
  std::vector<double> tpr, tnr;
};
SweepOracle exhaustive_threshold(std::span<const double> p, std::span<const std::uint8_t> y, double lower,
                                 double upper, std::size_t steps);

}  // namespace oracle
