#include <gtest/gtest.h>

#include <sstream>

#include "tskit/error.hpp"
#include "tskit/metrics.hpp"

using namespace tskit;

TEST(Metrics, RatesFromCounts) {
  const auto m = metrics_from_counts({9, 10, 90, 1});
  EXPECT_DOUBLE_EQ(*m.tpr, 0.9);
  EXPECT_DOUBLE_EQ(*m.tnr, 0.9);
  EXPECT_DOUBLE_EQ(*m.balanced(), 0.9);
  EXPECT_EQ(m.counts.total(), 110u);
}

TEST(Metrics, AllCorrect) {
  const std::vector<bool> d{true, false, false, true};
  const std::vector<std::uint8_t> y{1, 0, 0, 1};
  const auto m = compute_metrics(d, y);
  EXPECT_EQ(*m.tpr, 1.0);
  EXPECT_EQ(*m.tnr, 1.0);
  EXPECT_EQ(m.counts, (ConfusionCounts{2, 0, 2, 0}));
}

TEST(Metrics, UndefinedRatesAreEmpty) {
  const std::vector<bool> d{true, false};
  const std::vector<std::uint8_t> y{0, 0};
  const auto m = compute_metrics(d, y);
  EXPECT_FALSE(m.tpr.has_value());
  EXPECT_DOUBLE_EQ(*m.tnr, 0.5);
  EXPECT_DOUBLE_EQ(*m.balanced(), 0.5);
  EXPECT_FALSE(metrics_from_counts({}).balanced().has_value());
}

TEST(Metrics, MissingLabels) {
  std::vector<Prediction> p(1);
  p[0].node = 3;
  const std::vector<std::uint8_t> y{0, 1};
  try {
    compute_metrics(p, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLabel);
  }
  EXPECT_THROW(compute_metrics(std::vector<bool>{true}, y), Error);
}

TEST(Metrics, TotalsMatchScoredNodes) {
  std::vector<Prediction> p;
  std::vector<std::uint8_t> y(50);
  for (NodeId u = 0; u < 50; u += 2) {
    y[u] = u % 6 == 0;
    Prediction pr;
    pr.node = u;
    pr.decision = u % 4 == 0;
    p.push_back(pr);
  }
  const auto m = compute_metrics(p, y);
  EXPECT_EQ(m.counts.total(), p.size());
  std::size_t positives = 0;
  for (const auto& pr : p) positives += y[pr.node];
  EXPECT_EQ(m.counts.tp + m.counts.fn, positives);
}

TEST(PredictionsCsv, RoundTripPreservesScores) {
  std::vector<Prediction> p;
  const char* names[] = {"u1", "\\weird,name ", "x\"q", "Trojan_a"};
  for (NodeId u = 0; u < 4; ++u) {
    Prediction pr;
    pr.node = u * 3;
    pr.design = u < 2 ? "a" : "b,c";
    pr.instance = names[u];
    pr.p_trojan = 1.0 / (3.0 + u) + 1e-17 * u;
    pr.decision = u % 2;
    p.push_back(pr);
  }
  std::ostringstream out;
  write_predictions_csv(out, p);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "node_id,design,instance,p_ht,decision");
  std::istringstream in(out.str());
  const auto back = read_predictions_csv(in);
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(back[i].node, p[i].node);
    EXPECT_EQ(back[i].design, p[i].design);
    EXPECT_EQ(back[i].instance, p[i].instance);
    EXPECT_EQ(back[i].p_trojan, p[i].p_trojan);
    EXPECT_EQ(back[i].decision, p[i].decision);
  }
  std::vector<std::uint8_t> y(10, 0);
  y[3] = y[9] = 1;
  const auto a = compute_metrics(p, y);
  const auto b = compute_metrics(back, y);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.tpr, b.tpr);
  EXPECT_EQ(a.tnr, b.tnr);
}

TEST(PredictionsCsv, RejectsMalformedRows) {
  std::istringstream bad_header("id,design\n");
  EXPECT_THROW(read_predictions_csv(bad_header), Error);
  std::istringstream bad_row("node_id,design,instance,p_ht,decision\n1,a,b,notanumber,1\n");
  EXPECT_THROW(read_predictions_csv(bad_row), Error);
  std::istringstream short_row("node_id,design,instance,p_ht,decision\n1,a,b\n");
  EXPECT_THROW(read_predictions_csv(short_row), Error);
}
