#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tskit/error.hpp"
#include "tskit/experiment.hpp"
#include "tskit/synth.hpp"

using namespace tskit;
namespace fs = std::filesystem;

namespace {

// Four small synthetic designs in two families, written once per process.
const fs::path& corpus_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "tskit_experiment_unit";
    fs::remove_all(d);
    std::vector<SynthOptions> plan;
    const char* names[] = {"at1", "at2", "bt1", "bt2"};
    for (int i = 0; i < 4; ++i) {
      SynthOptions o;
      o.name = names[i];
      o.seed = 500 + i;
      o.benign_gates = 90;
      o.trigger_width = 4 + i;
      plan.push_back(o);
    }
    write_corpus(d, plan);
    return d;
  }();
  return dir;
}

RunConfig quick_config() {
  RunConfig c;
  c.train.epochs = 4;
  c.train.minibatches_per_epoch = 5;
  c.train.learning_rate = 0.5;
  c.train.hidden = {8};
  c.train.standardize = true;
  c.seeds = {0, 1};
  return c;
}

}  // namespace

TEST(Corpus, LoadsSortedDesigns) {
  const auto corpus = load_corpus(corpus_dir());
  EXPECT_EQ(corpus.design_names(), (std::vector<std::string>{"at1", "at2", "bt1", "bt2"}));
  EXPECT_THROW(load_corpus(corpus_dir() / "missing"), Error);
}

TEST(Experiment, PracticalRunIsCleanAndDeterministic) {
  const auto corpus = load_corpus(corpus_dir());
  ExperimentOptions opts;
  opts.test_design = "at1";
  opts.run = quick_config();
  const auto a = run_experiment(corpus, opts);
  const auto b = run_experiment(corpus, opts);
  EXPECT_EQ(report_to_json(a, "p.csv"), report_to_json(b, "p.csv"));

  EXPECT_EQ(a.split.designs_with_role(Role::Validation), std::vector<std::string>{"at2"});
  EXPECT_EQ(a.test_node_touches, 0u);
  EXPECT_EQ(a.non_train_touches, 0u);
  EXPECT_EQ(a.seed_runs.size(), 2u);
  EXPECT_EQ(a.config_json, to_json(opts.run));
  ASSERT_FALSE(a.predictions.empty());
  for (const auto& p : a.predictions) {
    EXPECT_EQ(p.design, "at1");
    EXPECT_EQ(p.decision, p.p_trojan >= a.threshold);
  }
  EXPECT_EQ(a.metrics.counts.total(), a.predictions.size());
  EXPECT_EQ(a.metrics.counts.tp + a.metrics.counts.fn, 4u + 2u);
}

TEST(Experiment, ReportRegeneratesFromPredictionsCsv) {
  const auto corpus = load_corpus(corpus_dir());
  ExperimentOptions opts;
  opts.test_design = "bt2";
  opts.run = quick_config();
  const auto r = run_experiment(corpus, opts);
  std::stringstream csv;
  write_predictions_csv(csv, r.predictions);
  const auto back = read_predictions_csv(csv);
  std::vector<std::uint8_t> labels;
  for (const auto& p : r.predictions) {
    if (labels.size() <= p.node) labels.resize(p.node + 1);
    labels[p.node] = p.instance.rfind("Trojan_", 0) == 0;
  }
  const auto m = compute_metrics(back, labels);
  EXPECT_EQ(m.counts, r.metrics.counts);
  EXPECT_EQ(m.tpr, r.metrics.tpr);
  EXPECT_EQ(m.tnr, r.metrics.tnr);
}

TEST(Experiment, RelaxedUsesTestAsValidation) {
  const auto corpus = load_corpus(corpus_dir());
  ExperimentOptions opts;
  opts.protocol = Protocol::Relaxed;
  opts.test_design = "bt1";
  opts.run = quick_config();
  const auto r = run_experiment(corpus, opts);
  EXPECT_EQ(r.split.designs_with_role(Role::Validation), std::vector<std::string>{"bt1"});
  EXPECT_EQ(r.split.designs_with_role(Role::Train).size(), 3u);
  EXPECT_EQ(r.test_node_touches, 0u);
  const auto json = report_to_json(r, "x.csv");
  EXPECT_NE(json.find("\"relaxed\""), std::string::npos);
}

TEST(Experiment, UnknownTestDesign) {
  const auto corpus = load_corpus(corpus_dir());
  ExperimentOptions opts;
  opts.test_design = "zz";
  opts.run = quick_config();
  try {
    run_experiment(corpus, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownDesign);
  }
}

TEST(Experiment, SummaryTableListsEveryDesign) {
  const auto corpus = load_corpus(corpus_dir());
  auto run = quick_config();
  run.seeds = {0};
  run.train.epochs = 2;
  const auto s = eval_all(corpus, Protocol::Practical, run);
  ASSERT_EQ(s.reports.size(), 4u);
  const auto table = format_summary(s);
  for (const char* d : {"at1", "at2", "bt1", "bt2"}) EXPECT_NE(table.find(d), std::string::npos);
  EXPECT_TRUE(s.mean_tpr.has_value());
}
