#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "toy.hpp"
#include "tskit/error.hpp"
#include "tskit/sage_model.hpp"

using namespace tskit;

namespace {

Embeddings rows(std::initializer_list<std::initializer_list<double>> r) {
  Embeddings m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

SageModel scalar_model(double w, double b) {
  SageModel m;
  SageLayer l;
  l.W = Matrix::Constant(1, 1, w);
  l.B = Matrix::Constant(1, 1, b);
  m.layers.push_back(l);
  m.head.W = Matrix::Zero(2, 1);
  m.head.bias = Vector::Zero(2);
  return m;
}

}  // namespace

TEST(Aggregate, MeanOfNeighbours) {
  const auto g = toy::graph_from_edges(3, {{0, 1}, {0, 2}});
  const GraphView view{&g.adjacency};
  const auto a = aggregate_mean(rows({{0, 0}, {1, 3}, {3, 5}}), view);
  EXPECT_DOUBLE_EQ(a(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(a(0, 1), 4.0);
}

TEST(Aggregate, IsolatedNodeGetsZero) {
  const auto g = toy::graph_from_edges(2, {});
  const GraphView view{&g.adjacency};
  const auto a = aggregate_mean(rows({{1, 2}, {3, 4}}), view);
  EXPECT_EQ(a.row(0).squaredNorm(), 0.0);
}

TEST(Aggregate, WeightedCentreOfPath) {
  // Path 1 - 0 - 2 with the centre first; its CSR entries are (0->1, 0->2).
  const auto g = toy::graph_from_edges(3, {{0, 1}, {0, 2}});
  std::vector<double> w(g.adjacency.targets.size(), 1.0);
  w[0] = 0.5;
  w[1] = 1.0;
  const GraphView view{&g.adjacency, w};
  const auto a = aggregate_mean(rows({{0}, {2}, {4}}), view);
  EXPECT_DOUBLE_EQ(a(0, 0), 2.5);
}

TEST(Aggregate, DimensionChecks) {
  const auto g = toy::graph_from_edges(3, {{0, 1}});
  const GraphView view{&g.adjacency};
  EXPECT_THROW(aggregate_mean(rows({{1}, {2}}), view), Error);
  std::vector<double> w(5, 1.0);
  EXPECT_THROW(aggregate_mean(rows({{1}, {2}, {3}}), GraphView{&g.adjacency, w}), Error);
}

TEST(LayerForward, IdentityThroughB) {
  const auto g = toy::graph_from_edges(2, {{0, 1}});
  SageLayer l{Matrix::Zero(2, 2), Matrix::Identity(2, 2)};
  const auto h = rows({{1, 2}, {0.5, 0}});
  EXPECT_EQ(layer_forward(l, h, GraphView{&g.adjacency}), h);
}

TEST(LayerForward, NegativePreactivationsClampToZero) {
  const auto g = toy::graph_from_edges(2, {{0, 1}});
  SageLayer l{Matrix::Zero(2, 2), -Matrix::Identity(2, 2)};
  const auto out = layer_forward(l, rows({{1, 2}, {3, 4}}), GraphView{&g.adjacency});
  EXPECT_EQ(out.squaredNorm(), 0.0);
}

TEST(LayerForward, ScalarHandComputation) {
  // Node 0 has the single neighbour 1 with embedding 3: ReLU(2*3 + 1*1) = 7.
  const auto g = toy::graph_from_edges(2, {{0, 1}});
  SageLayer l{Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0)};
  const auto out = layer_forward(l, rows({{1}, {3}}), GraphView{&g.adjacency});
  EXPECT_DOUBLE_EQ(out(0, 0), 7.0);
}

TEST(Softmax, SymmetryAndSaturation) {
  const auto p = softmax_rows(rows({{0.3, 0.3}, {20, -20}}));
  EXPECT_DOUBLE_EQ(p(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p(0, 1), 0.5);
  EXPECT_LT(p(1, kTrojanClass), 1e-15);
  EXPECT_NEAR(p.row(1).sum(), 1.0, 1e-12);
}

TEST(Forward, SingleNodeByHand) {
  // x = [1, 2]; W1 irrelevant (isolated); B1 = [[1, 0], [0.5, -1]] -> pre
  // (1, -1.5) -> h = (1, 0). Head W = [[0, 0], [2, 1]], bias (0, -1) ->
  // logits (0, 1) -> p_trojan = e / (1 + e).
  SageModel m;
  m.layers.push_back({Matrix::Constant(2, 2, 9.0), (Matrix(2, 2) << 1, 0, 0.5, -1).finished()});
  m.head.W = (Matrix(2, 2) << 0, 0, 2, 1).finished();
  m.head.bias = (Vector(2) << 0, -1).finished();
  const auto g = toy::graph_from_edges(1, {});
  FeatureMatrix x(1, 2);
  x << 1, 2;
  const auto p = forward(m, GraphView{&g.adjacency}, x);
  EXPECT_NEAR(p(0, 1), std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-15);
}

TEST(Forward, IsolatedNodesIgnoreW) {
  Rng rng(4);
  auto m = SageModel::initialize(3, std::vector<std::size_t>{4, 4}, 0, rng);
  auto b_only = m;
  for (auto& l : b_only.layers) l.W.setZero();
  const auto g = toy::graph_from_edges(3, {});
  FeatureMatrix x = FeatureMatrix::Random(3, 3);
  EXPECT_EQ(forward(m, GraphView{&g.adjacency}, x), forward(b_only, GraphView{&g.adjacency}, x));
}

TEST(Forward, RowsAreDistributions) {
  Rng rng(8);
  auto m = SageModel::initialize(5, std::vector<std::size_t>{6}, 0, rng);
  const auto g = toy::graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  const FeatureMatrix x = FeatureMatrix::Random(4, 5) * 3.0;
  const auto p = forward(m, GraphView{&g.adjacency}, x);
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-9);
    EXPECT_GT(p(i, 0), 0.0);
    EXPECT_LT(p(i, 0), 1.0);
  }
}

TEST(Forward, FeatureWidthMismatch) {
  Rng rng(1);
  auto m = SageModel::initialize(5, std::vector<std::size_t>{3}, 0, rng);
  const auto g = toy::graph_from_edges(2, {});
  try {
    forward(m, GraphView{&g.adjacency}, FeatureMatrix::Zero(2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
  }
}

TEST(Initialize, GlorotBoundsAndShapes) {
  Rng rng(2);
  const auto m = SageModel::initialize(18, std::vector<std::size_t>{256, 256}, 7, rng);
  EXPECT_EQ(m.layer_widths(), (std::vector<std::size_t>{18, 256, 256}));
  EXPECT_EQ(m.head.W.rows(), 2);
  EXPECT_EQ(m.head.bias, Vector::Zero(2));
  EXPECT_EQ(m.schema_fingerprint, 7u);
  const double bound = std::sqrt(6.0 / (18 + 256));
  EXPECT_LE(m.layers[0].W.cwiseAbs().maxCoeff(), bound);
  EXPECT_GT(m.layers[0].W.cwiseAbs().maxCoeff(), 0.9 * bound);
  EXPECT_EQ(m.num_parameters(), 2u * (256 * 18 + 256 * 256) + 2 * 256 + 2);
}

TEST(Loss, PerfectPredictionHasZeroLossAndGradient) {
  auto m = scalar_model(0.3, 0.2);
  m.head.bias << 0.0, 1000.0;
  const auto g = toy::graph_from_edges(2, {{0, 1}});
  FeatureMatrix x(2, 1);
  x << 1, 2;
  const std::vector<std::uint8_t> y{1, 1};
  const auto r = loss_and_gradients(m, GraphView{&g.adjacency}, x, y);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.gradients.layers[0].W.squaredNorm(), 0.0);
  EXPECT_EQ(r.gradients.head.W.squaredNorm(), 0.0);
  EXPECT_EQ(r.gradients.head.bias.squaredNorm(), 0.0);
}

TEST(Loss, CoinFlipCostsLnTwo) {
  const auto m = scalar_model(1, 1);
  const auto g = toy::graph_from_edges(1, {});
  FeatureMatrix x(1, 1);
  x << 0.7;
  const std::vector<std::uint8_t> y{0};
  const std::vector<double> lambda{1.0};
  EXPECT_NEAR(loss_value(m, GraphView{&g.adjacency}, x, y, lambda), std::log(2.0), 1e-15);
  const std::vector<double> half{0.5};
  EXPECT_NEAR(loss_value(m, GraphView{&g.adjacency}, x, y, half), 2 * std::log(2.0), 1e-15);
}

TEST(Loss, NonFiniteInputsAreReported) {
  const auto m = scalar_model(1, 1);
  const auto g = toy::graph_from_edges(1, {});
  FeatureMatrix x(1, 1);
  x << std::nan("");
  const std::vector<std::uint8_t> y{0};
  try {
    loss_and_gradients(m, GraphView{&g.adjacency}, x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteLoss);
  }
}

TEST(Loss, ConfidentMistakeIsClamped) {
  auto m = scalar_model(0, 0);
  m.head.bias << 0.0, 1000.0;
  const auto g = toy::graph_from_edges(1, {});
  FeatureMatrix x(1, 1);
  x << 1;
  const std::vector<std::uint8_t> y{0};
  EXPECT_NEAR(loss_value(m, GraphView{&g.adjacency}, x, y), -std::log(kProbabilityFloor), 1e-9);
}

TEST(Loss, GradientsMatchFiniteDifferencesOnSixNodes) {
  Rng rng(31);
  auto m = SageModel::initialize(4, std::vector<std::size_t>{5, 3}, 0, rng);
  m.head.bias << 0.1, -0.2;
  const auto g = toy::graph_from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 3}});
  std::vector<double> w(g.adjacency.targets.size());
  for (auto& v : w) v = 0.5 + uniform_unit(rng);
  const std::vector<double> div{1.5, 2, 2, 3, 2, 1};
  const GraphView view{&g.adjacency, w, div};
  FeatureMatrix x(6, 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = 2 * uniform_unit(rng) - 0.5;
  const std::vector<std::uint8_t> y{0, 1, 0, 0, 1, 0};
  const std::vector<double> lambda{0.5, 1, 0.25, 1, 0.8, 0.6};
  const auto analytic = loss_and_gradients(m, view, x, y, lambda).gradients;
  const auto numeric = oracle::numeric_gradients(m, view, x, y, lambda, 1e-5);
  auto check = [](const Matrix& a, const Matrix& n) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      // Central differences carry ~1e-10 of round-off, which dominates for
      // gradients that are exactly zero.
      const double scale = std::max(std::abs(a.data()[i]), std::abs(n.data()[i]));
      EXPECT_LE(std::abs(a.data()[i] - n.data()[i]), 1e-4 * scale + 1e-7) << a.data()[i] << " vs " << n.data()[i];
    }
  };
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    check(analytic.layers[l].W, numeric.layers[l].W);
    check(analytic.layers[l].B, numeric.layers[l].B);
  }
  check(analytic.head.W, numeric.head.W);
  check(analytic.head.bias, numeric.head.bias);
}

TEST(Sgd, Arithmetic) {
  auto m = scalar_model(1.0, 0.0);
  auto grads = ModelGradients::zeros_like(m);
  const auto before = m;
  sgd_step(m, grads, 0.1);
  EXPECT_EQ(m.layers[0].W, before.layers[0].W);
  grads.layers[0].W(0, 0) = 2.0;
  sgd_step(m, grads, 0.1);
  EXPECT_DOUBLE_EQ(m.layers[0].W(0, 0), 0.8);
  auto twice = scalar_model(1.0, 0.0);
  sgd_step(twice, grads, 0.25);
  sgd_step(twice, grads, 0.25);
  EXPECT_DOUBLE_EQ(twice.layers[0].W(0, 0), 1.0 - 2 * 0.25 * 2.0);
  EXPECT_THROW(sgd_step(m, grads, 0.0), Error);
}

TEST(Training, LossDecreasesOnSeparableToy) {
  // Feature 0 alone decides the class.
  const auto g = toy::graph_from_edges(8, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {6, 7}});
  FeatureMatrix x(8, 2);
  std::vector<std::uint8_t> y(8);
  for (int i = 0; i < 8; ++i) {
    y[i] = i % 4 == 0;
    x(i, 0) = y[i];
    x(i, 1) = 1.0;
  }
  Rng rng(3);
  auto m = SageModel::initialize(2, std::vector<std::size_t>{4}, 0, rng);
  const GraphView view{&g.adjacency};
  const double first = loss_value(m, view, x, y);
  for (int step = 0; step < 200; ++step) sgd_step(m, loss_and_gradients(m, view, x, y).gradients, 0.05);
  EXPECT_LT(loss_value(m, view, x, y), first);
}

TEST(RoundToFloat, IsIdempotent) {
  Rng rng(6);
  auto m = SageModel::initialize(3, std::vector<std::size_t>{2}, 0, rng);
  round_to_float(m);
  const auto once = m;
  round_to_float(m);
  EXPECT_EQ(m.layers[0].W, once.layers[0].W);
  EXPECT_EQ(static_cast<double>(static_cast<float>(m.layers[0].W(0, 0))), m.layers[0].W(0, 0));
}
