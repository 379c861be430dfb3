// tskit command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tskit/checkpoint.hpp"
#include "tskit/config.hpp"
#include "tskit/dataset_io.hpp"
#include "tskit/error.hpp"
#include "tskit/experiment.hpp"
#include "tskit/graph_builder.hpp"
#include "tskit/inference.hpp"
#include "tskit/labels.hpp"
#include "tskit/library_profile.hpp"
#include "tskit/metrics.hpp"
#include "tskit/netlist_json.hpp"
#include "tskit/netlist_parser.hpp"
#include "tskit/synth.hpp"
#include "tskit/trainer.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tskit::Error(tskit::ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw tskit::Error(tskit::ErrorCode::InvalidConfig, "bad seed '" + tok + "'");
    }
  }
  if (seeds.empty()) throw tskit::Error(tskit::ErrorCode::InvalidConfig, "empty seed list");
  return seeds;
}

tskit::RunConfig read_config(const std::string& path, const std::string& seeds, std::size_t jobs) {
  tskit::RunConfig rc = path.empty() ? tskit::RunConfig{} : tskit::load_run_config(path);
  if (!seeds.empty()) rc.seeds = parse_seeds(seeds);
  if (jobs) rc.jobs = jobs;
  return rc;
}

// One JSON object per line; wall-clock never enters the log so reruns diff clean.
class JsonlLog {
 public:
  explicit JsonlLog(const std::string& path) {
    if (path.empty()) return;
    out_.open(path, std::ios::binary);
    if (!out_) throw tskit::Error(tskit::ErrorCode::Io, "cannot write " + path);
  }
  tskit::TrainObserver observer() {
    if (!out_.is_open()) return {};
    return [this](const tskit::TrainEvent& ev) {
      Json j;
      j["seed"] = ev.seed;
      j["epoch"] = ev.epoch;
      if (ev.kind == tskit::TrainEvent::Kind::Minibatch) {
        j["kind"] = "minibatch";
        j["minibatch"] = ev.minibatch;
        j["loss"] = ev.loss;
        j["subgraph_nodes"] = ev.subgraph_nodes;
      } else {
        j["kind"] = "epoch";
        j["mean_loss"] = ev.loss;
        j["validation_score"] = ev.validation_score;
        j["threshold"] = ev.threshold;
      }
      out_ << j.dump() << '\n';
    };
  }

 private:
  std::ofstream out_;
};

std::string rate(const std::optional<double>& v) {
  if (!v) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tskit: gate-level hardware Trojan localisation with graph neural networks"};
  app.require_subcommand(1);

  // parse
  std::string parse_in, parse_lib, parse_out;
  bool parse_strict = false;
  auto* parse = app.add_subcommand("parse", "Parse a structural Verilog netlist into JSON");
  parse->add_option("netlist", parse_in, "Verilog file")->required()->check(CLI::ExistingFile);
  parse->add_option("--lib", parse_lib, "Library profile")->check(CLI::ExistingFile);
  parse->add_option("-o,--output", parse_out, "Output JSON")->required();
  parse->add_flag("--strict", parse_strict, "Fail on pins the profile cannot classify");

  // build
  std::vector<std::string> build_train, build_val, build_test;
  std::string build_schema, build_rules, build_out;
  auto* build = app.add_subcommand("build", "Build a dataset directory from parsed netlists");
  build->add_option("--train", build_train, "Training netlists (JSON)")->check(CLI::ExistingFile);
  build->add_option("--val", build_val, "Validation netlists (JSON)")->check(CLI::ExistingFile);
  build->add_option("--test", build_test, "Test netlists (JSON)")->check(CLI::ExistingFile);
  build->add_option("--schema", build_schema, "Feature schema JSON")->check(CLI::ExistingFile);
  build->add_option("--label-rule", build_rules, "Label rule JSON")->check(CLI::ExistingFile);
  build->add_option("-o,--output", build_out, "Dataset directory")->required();

  // stats
  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "Trojan/benign gate counts and imbalance ratios of a dataset");
  stats->add_option("dataset", stats_dir)->required()->check(CLI::ExistingDirectory);

  // train
  std::string train_dir, train_config, train_out, train_seeds, train_log;
  std::size_t train_jobs = 0;
  auto* train = app.add_subcommand("train", "Train on a dataset and keep the best seed");
  train->add_option("dataset", train_dir)->required()->check(CLI::ExistingDirectory);
  train->add_option("--config", train_config, "TOML training config")->check(CLI::ExistingFile);
  train->add_option("-o,--output", train_out, "Checkpoint path")->required();
  train->add_option("--seeds", train_seeds, "Comma-separated seeds (overrides the config)");
  train->add_option("--log", train_log, "JSON-lines training log");
  train->add_option("--jobs", train_jobs, "Seeds trained concurrently");

  // infer
  std::string infer_ckpt, infer_dir, infer_out, infer_design, infer_role;
  std::optional<double> infer_th;
  auto* infer = app.add_subcommand("infer", "Per-gate Trojan probabilities and decisions");
  infer->add_option("checkpoint", infer_ckpt)->required()->check(CLI::ExistingFile);
  infer->add_option("dataset", infer_dir)->required()->check(CLI::ExistingDirectory);
  infer->add_option("--th", infer_th, "Decision threshold (default: the checkpoint's tuned value)");
  infer->add_option("--design", infer_design, "Only gates of this design");
  infer->add_option("--role", infer_role, "Only gates with this role (train, validation, test)");
  infer->add_option("-o,--output", infer_out, "predictions.csv")->required();

  // tune
  std::string tune_ckpt, tune_dir, tune_out;
  auto* tune = app.add_subcommand("tune", "Sweep the decision threshold on the validation nodes");
  tune->add_option("checkpoint", tune_ckpt)->required()->check(CLI::ExistingFile);
  tune->add_option("dataset", tune_dir)->required()->check(CLI::ExistingDirectory);
  tune->add_option("-o,--output", tune_out, "threshold.json")->required();

  // eval / eval-all
  std::string eval_corpus, eval_protocol = "practical", eval_test, eval_config, eval_out, eval_seeds, eval_log,
                          eval_profile, eval_ckpt;
  std::size_t eval_jobs = 0;
  auto* eval = app.add_subcommand("eval", "Run one leave-one-out experiment");
  auto* eval_all = app.add_subcommand("eval-all", "Run the experiment with every design as the test design");
  for (auto* sc : {eval, eval_all}) {
    sc->add_option("--corpus", eval_corpus, "Directory of .v/.json netlists")->required()->check(
        CLI::ExistingDirectory);
    sc->add_option("--protocol", eval_protocol, "practical or relaxed")
        ->check(CLI::IsMember({"practical", "relaxed"}));
    sc->add_option("--config", eval_config, "TOML training config")->check(CLI::ExistingFile);
    sc->add_option("--seeds", eval_seeds, "Comma-separated seeds (overrides the config)");
    sc->add_option("--lib", eval_profile, "Library profile for .v files")->check(CLI::ExistingFile);
    sc->add_option("--log", eval_log, "JSON-lines training log");
    sc->add_option("--jobs", eval_jobs, "Seeds trained concurrently");
    sc->add_option("-o,--output", eval_out, "Report JSON")->required();
  }
  eval->add_option("--test", eval_test, "Test design")->required();
  eval->add_option("--save-model", eval_ckpt, "Also write the selected checkpoint");

  // metrics
  std::string metrics_pred, metrics_dir;
  auto* metrics = app.add_subcommand("metrics", "Recompute TPR/TNR from a predictions file");
  metrics->add_option("predictions", metrics_pred)->required()->check(CLI::ExistingFile);
  metrics->add_option("dataset", metrics_dir, "Dataset providing labels")->check(CLI::ExistingDirectory);
  metrics->add_option("--corpus", eval_corpus, "Corpus providing labels instead of a dataset")
      ->check(CLI::ExistingDirectory);

  // synth
  std::string synth_out;
  bool synth_parser = false;
  auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark corpus");
  synth->add_option("-o,--output", synth_out, "Output directory")->required();
  synth->add_flag("--parser-corpus", synth_parser, "Write the 20-design parser corpus instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) {
      const auto profile = parse_lib.empty() ? tskit::LibraryProfile{} : tskit::load_library_profile(parse_lib);
      const auto n = tskit::parse_netlist_file(parse_in, profile, tskit::ParseOptions{parse_strict});
      tskit::save_netlist(n, parse_out);
      std::cout << n.name << ": " << n.cells.size() << " cells, " << n.nets.size() << " nets\n";
    } else if (*build) {
      std::vector<tskit::Netlist> netlists;
      std::vector<tskit::Role> roles;
      auto add = [&](const std::vector<std::string>& files, tskit::Role role) {
        for (const auto& f : files) {
          netlists.push_back(tskit::load_netlist(f));
          roles.push_back(role);
        }
      };
      add(build_train, tskit::Role::Train);
      add(build_val, tskit::Role::Validation);
      add(build_test, tskit::Role::Test);
      std::vector<tskit::DesignInput> inputs;
      for (std::size_t i = 0; i < netlists.size(); ++i) inputs.push_back({&netlists[i], roles[i]});
      const auto schema =
          build_schema.empty() ? tskit::FeatureSchema::default_schema() : tskit::load_schema(build_schema);
      const auto rule = build_rules.empty() ? tskit::LabelRule{} : tskit::LabelRule::load(build_rules);
      const auto graph = tskit::build_graph(inputs, schema, rule);
      tskit::save_dataset(graph, build_out);
      std::cout << graph.num_nodes() << " nodes, " << graph.adjacency.targets.size() / 2 << " edges, "
                << graph.schema.width() << " features\n";
    } else if (*stats) {
      const auto graph = tskit::load_dataset(stats_dir);
      const auto report = tskit::compute_imbalance(graph);
      std::printf("%-16s %8s %8s %8s\n", "design", "trojan", "benign", "ratio");
      for (const auto& e : report.per_design) {
        std::printf("%-16s %8zu %8zu %8.3f\n", e.design.c_str(), e.trojan, e.benign, e.ratio);
      }
      const auto& a = report.aggregate;
      std::printf("%-16s %8zu %8zu %8.3f\n", "total", a.trojan, a.benign, a.ratio);
    } else if (*train) {
      const auto rc = read_config(train_config, train_seeds, train_jobs);
      const auto graph = tskit::load_dataset(train_dir);
      JsonlLog log(train_log);
      const auto sel = tskit::run_seeds(graph, rc.train, rc.seeds, rc.jobs, log.observer());
      tskit::CheckpointMeta meta;
      meta.sampler = sel.best.record.sampler;
      meta.seed = sel.seed;
      meta.config = tskit::to_json(rc);
      tskit::save_checkpoint(train_out, sel.best.model, meta);
      for (const auto& r : sel.runs) {
        std::cout << "seed " << r.seed << ": validation " << r.validation_score << " (epoch " << r.best_epoch
                  << ")\n";
      }
      std::cout << "selected seed " << sel.seed << ", threshold " << sel.best.model.threshold << "\n";
    } else if (*infer) {
      const auto ckpt = tskit::load_checkpoint(infer_ckpt);
      const auto graph = tskit::load_dataset(infer_dir);
      tskit::NodeFilter filter;
      if (!infer_design.empty()) filter.design = infer_design;
      if (!infer_role.empty()) {
        filter.role = tskit::role_from_string(infer_role);
        if (!filter.role) throw tskit::Error(tskit::ErrorCode::InvalidConfig, "unknown role '" + infer_role + "'");
      }
      const double th = infer_th.value_or(ckpt.model.threshold);
      const auto preds = tskit::predict(ckpt.model, graph, th, filter);
      tskit::save_predictions_csv(infer_out, preds);
      const auto m = tskit::compute_metrics(preds, graph.labels);
      std::cout << preds.size() << " gates, threshold " << th << ", TPR " << rate(m.tpr) << ", TNR "
                << rate(m.tnr) << "\n";
    } else if (*tune) {
      const auto ckpt = tskit::load_checkpoint(tune_ckpt);
      const auto graph = tskit::load_dataset(tune_dir);
      const auto validation = graph.nodes_with_role(tskit::Role::Validation);
      if (validation.empty()) throw tskit::Error(tskit::ErrorCode::NoValidationNodes, "dataset has none");
      const auto res = tskit::tune_threshold(ckpt.model, graph, validation);
      Json j;
      j["threshold"] = res.threshold;
      j["score"] = res.score;
      j["single_class"] = res.single_class;
      write_text(tune_out, j.dump(2) + "\n");
      std::cout << "threshold " << res.threshold << ", score " << res.score << "\n";
    } else if (*eval || *eval_all) {
      tskit::CorpusOptions copts;
      if (!eval_profile.empty()) copts.profile = eval_profile;
      const auto corpus = tskit::load_corpus(eval_corpus, copts);
      const auto rc = read_config(eval_config, eval_seeds, eval_jobs);
      const auto protocol = tskit::protocol_from_string(eval_protocol);
      JsonlLog log(eval_log);
      const fs::path out(eval_out);
      auto pred_path = [&](const std::string& design) {
        return out.stem().string() + (design.empty() ? "" : "." + design) + ".predictions.csv";
      };
      if (*eval) {
        tskit::ExperimentOptions opts;
        opts.protocol = protocol;
        opts.test_design = eval_test;
        opts.run = rc;
        opts.observer = log.observer();
        const auto report = tskit::run_experiment(corpus, opts);
        const std::string preds = pred_path("");
        write_text(out, tskit::report_to_json(report, preds));
        tskit::save_predictions_csv(out.parent_path() / preds, report.predictions);
        if (!eval_ckpt.empty()) {
          tskit::CheckpointMeta meta;
          meta.sampler = report.record.sampler;
          meta.seed = report.seed;
          meta.config = report.config_json;
          tskit::save_checkpoint(eval_ckpt, report.model, meta);
        }
        std::cout << report.test_design << " (" << eval_protocol << "): TPR " << rate(report.metrics.tpr)
                  << ", TNR " << rate(report.metrics.tnr) << ", threshold " << report.threshold << ", seed "
                  << report.seed << "\n";
      } else {
        const auto summary = tskit::eval_all(corpus, protocol, rc, log.observer());
        for (const auto& r : summary.reports) {
          const auto per = out.parent_path() / (out.stem().string() + "." + r.test_design + ".json");
          const std::string preds = pred_path(r.test_design);
          write_text(per, tskit::report_to_json(r, preds));
          tskit::save_predictions_csv(out.parent_path() / preds, r.predictions);
        }
        write_text(out, tskit::summary_to_json(summary));
        std::cout << tskit::format_summary(summary);
      }
    } else if (*metrics) {
      const auto preds = tskit::load_predictions_csv(metrics_pred);
      tskit::Metrics m;
      if (!metrics_dir.empty()) {
        m = tskit::compute_metrics(preds, tskit::load_dataset(metrics_dir).labels);
      } else if (!eval_corpus.empty()) {
        // Labels by (design, instance) from the corpus label rule.
        const auto corpus = tskit::load_corpus(eval_corpus);
        std::vector<bool> decisions;
        std::vector<std::uint8_t> labels;
        for (const auto& p : preds) {
          const tskit::Netlist* n = nullptr;
          for (const auto& d : corpus.designs) {
            if (d.name == p.design) n = &d;
          }
          if (!n) throw tskit::Error(tskit::ErrorCode::MissingLabel, "design '" + p.design + "' not in corpus");
          const auto lab = tskit::derive_labels(*n, corpus.labels);
          std::size_t idx = n->cells.size();
          for (std::size_t i = 0; i < n->cells.size(); ++i) {
            if (n->cells[i].instance_name == p.instance) idx = i;
          }
          if (idx == n->cells.size()) throw tskit::Error(tskit::ErrorCode::MissingLabel, "gate " + p.instance);
          decisions.push_back(p.decision);
          labels.push_back(lab[idx]);
        }
        m = tskit::compute_metrics(decisions, labels);
      } else {
        throw tskit::Error(tskit::ErrorCode::InvalidConfig, "pass a dataset directory or --corpus");
      }
      std::cout << "TP " << m.counts.tp << " FP " << m.counts.fp << " TN " << m.counts.tn << " FN " << m.counts.fn
                << "\nTPR " << rate(m.tpr) << "\nTNR " << rate(m.tnr) << "\n";
    } else if (*synth) {
      tskit::write_corpus(synth_out, synth_parser ? tskit::parser_corpus_plan() : tskit::default_corpus_plan());
      std::cout << "wrote corpus to " << synth_out << "\n";
    }
  } catch (const tskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
