#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tskit/config.hpp"
#include "tskit/feature_schema.hpp"
#include "tskit/labels.hpp"
#include "tskit/metrics.hpp"
#include "tskit/netlist.hpp"
#include "tskit/splits.hpp"
#include "tskit/trainer.hpp"

namespace tskit {

struct Corpus {
  std::vector<Netlist> designs;  // sorted by design name
  LabelRule labels;
  FeatureSchema schema;

  std::vector<std::string> design_names() const;
};

struct CorpusOptions {
  // Library profile for *.v files; defaults to the single *.profile file in
  // the corpus directory, if any, and otherwise to the pin-name heuristic.
  std::optional<std::filesystem::path> profile;
  // Label rule; defaults to <dir>/labels.json if present, else the built-in
  // name patterns.
  std::optional<std::filesystem::path> labels;
  // Feature schema; defaults to <dir>/schema.json if present.
  std::optional<std::filesystem::path> schema;
  bool strict = false;
};

// Reads every *.v and *.json netlist directly inside `dir`. Design names
// come from the module names and must be unique.
Corpus load_corpus(const std::filesystem::path& dir, const CorpusOptions& options = {});

struct ExperimentOptions {
  Protocol protocol = Protocol::Practical;
  std::string test_design;
  RunConfig run;
  TrainObserver observer;  // optional per-minibatch/epoch log
};

struct EvalReport {
  Protocol protocol = Protocol::Practical;
  std::string test_design;
  SplitPlan split;
  std::uint64_t seed = 0;  // selected seed
  double threshold = 0.0;
  double validation_score = 0.0;
  Metrics metrics;
  std::vector<SeedRun> seed_runs;
  std::size_t test_node_touches = 0;  // summed over every seed's training
  std::size_t non_train_touches = 0;
  std::string config_json;
  std::vector<Prediction> predictions;  // test-design gates
  SageModel model;
  TrainRecord record;  // of the selected seed
};

// Split, build the graph, train every seed, keep the best on validation,
// tune the threshold there and score the test design.
EvalReport run_experiment(const Corpus& corpus, const ExperimentOptions& options);

// report.json body. Contains no timestamps or wall-clock values, so equal
// inputs give byte-identical output.
std::string report_to_json(const EvalReport& report, const std::string& predictions_path);

struct EvalSummary {
  std::vector<EvalReport> reports;
  std::optional<double> mean_tpr;
  std::optional<double> mean_tnr;
};

// Every design in turn as the test design.
EvalSummary eval_all(const Corpus& corpus, Protocol protocol, const RunConfig& run,
                     const TrainObserver& observer = {});

// Per-design TPR/TNR rows followed by the averages; "N/A" for undefined rates.
std::string format_summary(const EvalSummary& summary);
std::string summary_to_json(const EvalSummary& summary);

}  // namespace tskit
