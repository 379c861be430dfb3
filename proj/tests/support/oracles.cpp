#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oracle {

std::vector<std::set<NodeId>> brute_force_adjacency(const tskit::Netlist& n) {
  const std::size_t g = n.cells.size();
  std::vector<std::set<NodeId>> adj(g);
  auto drives_into = [&](const tskit::Cell& a, const tskit::Cell& b) {
    for (const auto& o : a.output_pins) {
      for (const auto& i : b.input_pins) {
        if (o.net == i.net) return true;
      }
    }
    return false;
  };
  for (NodeId u = 0; u < g; ++u) {
    for (NodeId v = 0; v < g; ++v) {
      if (u == v) continue;
      if (drives_into(n.cells[u], n.cells[v]) || drives_into(n.cells[v], n.cells[u])) adj[u].insert(v);
    }
  }
  return adj;
}

std::vector<std::vector<std::uint32_t>> all_pairs_shortest_paths(const std::vector<std::set<NodeId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (NodeId j : adj[i]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kInf) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

std::vector<std::uint32_t> distances_to_ports(const tskit::Netlist& n,
                                              const std::vector<std::vector<std::uint32_t>>& apsp, bool inputs) {
  const auto& ports = inputs ? n.primary_inputs : n.primary_outputs;
  auto touches = [&](const tskit::Cell& c) {
    for (const auto* pins : {&c.input_pins, &c.output_pins}) {
      for (const auto& p : *pins) {
        if (std::find(ports.begin(), ports.end(), p.net) != ports.end()) return true;
      }
    }
    return false;
  };
  std::vector<NodeId> sources;
  for (NodeId c = 0; c < n.cells.size(); ++c) {
    if (touches(n.cells[c])) sources.push_back(c);
  }
  std::vector<std::uint32_t> out(n.cells.size(), 0);
  for (NodeId u = 0; u < n.cells.size(); ++u) {
    std::uint32_t best = kInf;
    for (NodeId s : sources) best = std::min(best, apsp[s][u]);
    out[u] = best == kInf ? 0 : best + 1;
  }
  return out;
}

tskit::Netlist random_netlist(tskit::Rng& rng, std::size_t max_gates) {
  using tskit::uniform_index;
  tskit::Netlist n;
  n.name = "rnd";
  const std::size_t gates = 1 + uniform_index(rng, max_gates);
  const std::size_t num_nets = 2 + uniform_index(rng, gates + 4);
  for (std::size_t i = 0; i < num_nets; ++i) n.nets.push_back("w" + std::to_string(i));
  n.nets.push_back(tskit::kConstZeroNet);
  n.nets.push_back(tskit::kConstOneNet);
  const std::size_t pis = uniform_index(rng, 4);
  const std::size_t pos = uniform_index(rng, 4);
  for (std::size_t i = 0; i < pis; ++i) n.primary_inputs.push_back(n.nets[uniform_index(rng, num_nets)]);
  for (std::size_t i = 0; i < pos; ++i) n.primary_outputs.push_back(n.nets[uniform_index(rng, num_nets)]);
  auto dedup = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(n.primary_inputs);
  dedup(n.primary_outputs);
  for (std::size_t g = 0; g < gates; ++g) {
    tskit::Cell c;
    c.instance_name = "g" + std::to_string(g);
    c.cell_type = "CELL";
    c.family = "OTHER";
    const std::size_t ins = uniform_index(rng, 4);
    const std::size_t outs = uniform_index(rng, 4) == 0 ? 0 : 1 + uniform_index(rng, 2);
    for (std::size_t i = 0; i < ins; ++i) {
      const bool tie = uniform_index(rng, 10) == 0;
      c.input_pins.push_back({"I" + std::to_string(i), tie ? tskit::kConstOneNet : n.nets[uniform_index(rng, num_nets)]});
    }
    for (std::size_t o = 0; o < outs; ++o) c.output_pins.push_back({"O" + std::to_string(o), n.nets[uniform_index(rng, num_nets)]});
    n.cells.push_back(std::move(c));
  }
  return n;
}

tskit::ModelGradients numeric_gradients(const tskit::SageModel& model, const tskit::GraphView& view,
                                        const tskit::FeatureMatrix& x, std::span<const std::uint8_t> labels,
                                        std::span<const double> lambda, double eps) {
  auto grads = tskit::ModelGradients::zeros_like(model);
  tskit::SageModel probe = model;

  // Parallel walk over model tensors and gradient tensors in checkpoint order.
  std::vector<Eigen::MatrixXd*> g_mats;
  for (auto& l : grads.layers) {
    g_mats.push_back(&l.W);
    g_mats.push_back(&l.B);
  }
  g_mats.push_back(&grads.head.W);

  std::size_t t = 0;
  auto visit_matrix = [&](Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double keep = m.data()[i];
      m.data()[i] = keep + eps;
      const double up = tskit::loss_value(probe, view, x, labels, lambda);
      m.data()[i] = keep - eps;
      const double down = tskit::loss_value(probe, view, x, labels, lambda);
      m.data()[i] = keep;
      out.data()[i] = (up - down) / (2 * eps);
    }
  };
  for (auto& l : probe.layers) {
    visit_matrix(l.W, *g_mats[t++]);
    visit_matrix(l.B, *g_mats[t++]);
  }
  visit_matrix(probe.head.W, *g_mats[t++]);
  for (Eigen::Index i = 0; i < probe.head.bias.size(); ++i) {
    const double keep = probe.head.bias[i];
    probe.head.bias[i] = keep + eps;
    const double up = tskit::loss_value(probe, view, x, labels, lambda);
    probe.head.bias[i] = keep - eps;
    const double down = tskit::loss_value(probe, view, x, labels, lambda);
    probe.head.bias[i] = keep;
    grads.head.bias[i] = (up - down) / (2 * eps);
  }
  return grads;
}

double Logistic::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const Eigen::RowVectorXd z = (row - mean).cwiseQuotient(scale);
  return 1.0 / (1.0 + std::exp(-(z.dot(w.transpose()) + b)));
}

Logistic fit_logistic(const tskit::FeatureMatrix& x, std::span<const std::uint8_t> y, std::size_t iterations,
                      double learning_rate) {
  const Eigen::Index n = x.rows(), f = x.cols();
  Logistic m;
  m.mean = x.colwise().mean();
  m.scale = ((x.rowwise() - m.mean).array().square().colwise().sum() / static_cast<double>(n)).sqrt();
  for (Eigen::Index j = 0; j < f; ++j) {
    if (m.scale[j] == 0.0) m.scale[j] = 1.0;
  }
  const Eigen::MatrixXd z = (x.rowwise() - m.mean).array().rowwise() / m.scale.array();
  double pos = 0;
  for (auto v : y) pos += v;
  const double w_pos = 0.5 / std::max(pos, 1.0), w_neg = 0.5 / std::max(static_cast<double>(n) - pos, 1.0);
  m.w = Eigen::VectorXd::Zero(f);
  for (std::size_t it = 0; it < iterations; ++it) {
    const Eigen::VectorXd s = z * m.w + Eigen::VectorXd::Constant(n, m.b);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-s[i]));
      r[i] = (p - y[static_cast<std::size_t>(i)]) * (y[static_cast<std::size_t>(i)] ? w_pos : w_neg);
    }
    m.w -= learning_rate * (z.transpose() * r);
    m.b -= learning_rate * r.sum();
  }
  return m;
}

SweepOracle exhaustive_threshold(std::span<const double> p, std::span<const std::uint8_t> y, double lower,
                                 double upper, std::size_t steps) {
  SweepOracle best;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double th = lower + (upper - lower) * static_cast<double>(k) / static_cast<double>(steps);
    double tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const bool hit = p[i] >= th;
      if (y[i]) {
        hit ? ++tp : ++fn;
      } else {
        hit ? ++fp : ++tn;
      }
    }
    const double tpr = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double tnr = tn + fp > 0 ? tn / (tn + fp) : 0.0;
    best.tpr.push_back(tpr);
    best.tnr.push_back(tnr);
    const double score = (tpr + tnr) / 2;
    if (score > best.score) {
      best.score = score;
      best.threshold = th;
    }
  }
  return best;
}

}  // namespace oracle
