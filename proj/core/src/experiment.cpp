#include "tskit/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "tskit/error.hpp"
#include "tskit/graph_builder.hpp"
#include "tskit/inference.hpp"
#include "tskit/library_profile.hpp"
#include "tskit/netlist_json.hpp"
#include "tskit/netlist_parser.hpp"

namespace tskit {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::vector<std::string> Corpus::design_names() const {
  std::vector<std::string> out;
  out.reserve(designs.size());
  for (const auto& d : designs) out.push_back(d.name);
  return out;
}

Corpus load_corpus(const fs::path& dir, const CorpusOptions& options) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<fs::path> verilog, json, profiles;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    const auto stem = entry.path().filename().string();
    if (ext == ".v") {
      verilog.push_back(entry.path());
    } else if (ext == ".json" && stem != "labels.json" && stem != "schema.json") {
      json.push_back(entry.path());
    } else if (ext == ".profile") {
      profiles.push_back(entry.path());
    }
  }

  LibraryProfile profile;
  if (options.profile) {
    profile = load_library_profile(*options.profile);
  } else if (profiles.size() == 1) {
    profile = load_library_profile(profiles.front());
  } else if (profiles.size() > 1) {
    throw Error(ErrorCode::InvalidConfig, "several *.profile files in " + dir.string() + "; pass one explicitly");
  }

  Corpus corpus;
  const ParseOptions popts{options.strict};
  for (const auto& p : verilog) corpus.designs.push_back(parse_netlist_file(p, profile, popts));
  for (const auto& p : json) corpus.designs.push_back(load_netlist(p));
  std::sort(corpus.designs.begin(), corpus.designs.end(),
            [](const Netlist& a, const Netlist& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < corpus.designs.size(); ++i) {
    if (corpus.designs[i].name == corpus.designs[i - 1].name) {
      throw Error(ErrorCode::DuplicateDesign, "design '" + corpus.designs[i].name + "' appears twice in the corpus");
    }
  }

  if (options.labels) {
    corpus.labels = LabelRule::load(*options.labels);
  } else if (fs::exists(dir / "labels.json")) {
    corpus.labels = LabelRule::load(dir / "labels.json");
  }
  if (options.schema) {
    corpus.schema = load_schema(*options.schema);
  } else if (fs::exists(dir / "schema.json")) {
    corpus.schema = load_schema(dir / "schema.json");
  } else {
    corpus.schema = FeatureSchema::default_schema();
  }
  return corpus;
}

EvalReport run_experiment(const Corpus& corpus, const ExperimentOptions& options) {
  const auto names = corpus.design_names();
  const SplitPlan plan = options.protocol == Protocol::Practical
                             ? make_practical_split(names, options.test_design, options.run.split_seed)
                             : make_relaxed_split(names, options.test_design);

  // One role per design in the graph; under the relaxed protocol the test
  // design is scored as validation too, through an explicit node set.
  std::vector<DesignInput> inputs;
  for (const auto& d : corpus.designs) {
    Role role = Role::Train;
    for (const auto& [name, r] : plan.assignments) {
      if (name == d.name && (r == Role::Test || role == Role::Train)) role = r;
    }
    inputs.push_back({&d, role});
  }
  const GateGraph graph = build_graph(inputs, corpus.schema, corpus.labels);
  const std::vector<NodeId> validation = plan.protocol == Protocol::Relaxed
                                             ? graph.nodes_of_design(plan.test_design)
                                             : graph.nodes_with_role(Role::Validation);

  SeedSelection sel = run_seeds(graph, options.run.train, options.run.seeds, validation, options.run.jobs,
                                options.observer);

  EvalReport report;
  report.protocol = plan.protocol;
  report.test_design = plan.test_design;
  report.split = plan;
  report.seed = sel.seed;
  report.seed_runs = sel.runs;
  for (const auto& r : sel.runs) {
    report.test_node_touches += r.test_node_touches;
    report.non_train_touches += r.non_train_touches;
  }

  const ThresholdResult tuned = tune_threshold(sel.best.model, graph, validation, options.run.train.threshold);
  report.threshold = tuned.threshold;
  report.validation_score = tuned.score;
  sel.best.model.threshold = tuned.threshold;

  NodeFilter filter;
  filter.role = Role::Test;
  report.predictions = predict(sel.best.model, graph, tuned.threshold, filter);
  report.metrics = compute_metrics(report.predictions, graph.labels);
  report.config_json = to_json(options.run);
  report.model = std::move(sel.best.model);
  report.record = std::move(sel.best.record);
  return report;
}

namespace {

Json rate_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json report_json(const EvalReport& r, const std::string& predictions_path) {
  Json j;
  j["protocol"] = std::string(to_string(r.protocol));
  j["test_design"] = r.test_design;
  j["split"] = {{"train", r.split.designs_with_role(Role::Train)},
                {"validation", r.split.designs_with_role(Role::Validation)},
                {"test", r.split.designs_with_role(Role::Test)},
                {"random_validation", r.split.random_validation},
                {"split_seed", r.split.seed}};
  j["seed"] = r.seed;
  j["threshold"] = r.threshold;
  j["validation_score"] = r.validation_score;
  j["tpr"] = rate_json(r.metrics.tpr);
  j["tnr"] = rate_json(r.metrics.tnr);
  j["confusion"] = {{"tp", r.metrics.counts.tp},
                    {"fp", r.metrics.counts.fp},
                    {"tn", r.metrics.counts.tn},
                    {"fn", r.metrics.counts.fn}};
  Json runs = Json::array();
  for (const auto& s : r.seed_runs) {
    runs.push_back({{"seed", s.seed}, {"validation_score", s.validation_score}, {"best_epoch", s.best_epoch}});
  }
  j["seed_runs"] = std::move(runs);
  j["audit"] = {{"test_node_touches", r.test_node_touches}, {"non_train_touches", r.non_train_touches}};
  j["config"] = Json::parse(r.config_json);
  j["predictions"] = predictions_path;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report, const std::string& predictions_path) {
  return report_json(report, predictions_path).dump(2) + "\n";
}

EvalSummary eval_all(const Corpus& corpus, Protocol protocol, const RunConfig& run, const TrainObserver& observer) {
  EvalSummary summary;
  double tpr_sum = 0.0, tnr_sum = 0.0;
  std::size_t tpr_n = 0, tnr_n = 0;
  for (const auto& name : corpus.design_names()) {
    ExperimentOptions opts;
    opts.protocol = protocol;
    opts.test_design = name;
    opts.run = run;
    opts.observer = observer;
    summary.reports.push_back(run_experiment(corpus, opts));
    const auto& m = summary.reports.back().metrics;
    if (m.tpr) {
      tpr_sum += *m.tpr;
      ++tpr_n;
    }
    if (m.tnr) {
      tnr_sum += *m.tnr;
      ++tnr_n;
    }
  }
  if (tpr_n) summary.mean_tpr = tpr_sum / static_cast<double>(tpr_n);
  if (tnr_n) summary.mean_tnr = tnr_sum / static_cast<double>(tnr_n);
  return summary;
}

std::string format_summary(const EvalSummary& summary) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("N/A");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::size_t width = 7;
  for (const auto& r : summary.reports) width = std::max(width, r.test_design.size());
  std::string out;
  auto row = [&](const std::string& name, const std::string& a, const std::string& b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %6s  %6s\n", static_cast<int>(width), name.c_str(), a.c_str(), b.c_str());
    out += buf;
  };
  row("design", "TPR", "TNR");
  for (const auto& r : summary.reports) row(r.test_design, cell(r.metrics.tpr), cell(r.metrics.tnr));
  row("average", cell(summary.mean_tpr), cell(summary.mean_tnr));
  return out;
}

std::string summary_to_json(const EvalSummary& summary) {
  Json rows = Json::array();
  for (const auto& r : summary.reports) {
    rows.push_back({{"design", r.test_design},
                    {"tpr", rate_json(r.metrics.tpr)},
                    {"tnr", rate_json(r.metrics.tnr)},
                    {"seed", r.seed},
                    {"threshold", r.threshold}});
  }
  Json j;
  j["protocol"] = summary.reports.empty() ? std::string() : std::string(to_string(summary.reports.front().protocol));
  j["designs"] = std::move(rows);
  j["average"] = {{"tpr", rate_json(summary.mean_tpr)}, {"tnr", rate_json(summary.mean_tnr)}};
  return j.dump(2) + "\n";
}

}  // namespace tskit
