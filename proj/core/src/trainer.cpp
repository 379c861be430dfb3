#include "tskit/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <chrono>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "tskit/error.hpp"

namespace tskit {

void TrainConfig::validate() const {
  if (minibatches_per_epoch < 1) throw Error(ErrorCode::InvalidConfig, "minibatches_per_epoch must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::InvalidConfig, "learning_rate must be positive");
  }
  if (patience < 1) throw Error(ErrorCode::InvalidConfig, "patience must be >= 1");
  if (hidden.empty()) throw Error(ErrorCode::InvalidConfig, "at least one hidden layer is required");
  for (auto w : hidden) {
    if (w == 0) throw Error(ErrorCode::InvalidConfig, "hidden widths must be >= 1");
  }
  threshold.validate();
}

TrainResult train(const GateGraph& graph, const TrainConfig& config, const TrainObserver& observer) {
  const auto validation = graph.nodes_with_role(Role::Validation);
  return train(graph, config, validation, observer);
}

TrainResult train(const GateGraph& graph, const TrainConfig& config, std::span<const NodeId> validation_nodes,
                  const TrainObserver& observer) {
  config.validate();
  if (validation_nodes.empty()) throw Error(ErrorCode::NoValidationNodes, "no validation nodes to score against");

  SamplerConfig sampler_cfg = config.sampler;
  sampler_cfg.rng_seed = derive_seed(config.seed, 1);
  const RandomWalkSampler sampler(graph, sampler_cfg);

  TrainResult result;
  result.record.sampler = sampler.config();

  Rng init_rng(derive_seed(config.seed, 0));
  SageModel model = SageModel::initialize(graph.schema.width(), config.hidden, graph.schema.fingerprint(), init_rng);
  if (config.standardize) model.scaler = FeatureScaler::fit(graph.features, sampler.train_nodes());

  SageModel best = model;
  round_to_float(best);
  if (config.epochs == 0) {
    result.model = std::move(best);
    return result;
  }

  const NormTable norm = sampler.estimate_normalization();
  const double step = config.learning_rate / static_cast<double>(sampler.train_nodes().size());
  Rng batch_rng(derive_seed(config.seed, 2));
  bool have_best = false;
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    for (std::size_t mb = 0; mb < config.minibatches_per_epoch; ++mb) {
      Subgraph sg = sampler.sample(batch_rng);
      sampler.apply_normalization(norm, sg);

      FeatureMatrix x(static_cast<Eigen::Index>(sg.node_ids.size()), graph.features.cols());
      std::vector<std::uint8_t> labels(sg.node_ids.size());
      for (std::size_t i = 0; i < sg.node_ids.size(); ++i) {
        const NodeId u = sg.node_ids[i];
        if (graph.roles[u] != Role::Train) {
          ++result.record.non_train_touches;
          if (graph.roles[u] == Role::Test) ++result.record.test_node_touches;
        }
        x.row(static_cast<Eigen::Index>(i)) = graph.features.row(u);
        labels[i] = graph.labels[u];
      }
      // GraphSAINT-style unbiased aggregation: each sampled neighbour is
      // weighted by 1/alpha and the sum is divided by the full degree.
      std::vector<double> weights(sg.alpha.size());
      for (std::size_t e = 0; e < weights.size(); ++e) weights[e] = 1.0 / sg.alpha[e];
      const GraphView view{&sg.local, weights, sg.full_degree};

      LossResult lr;
      try {
        lr = loss_and_gradients(model, view, x, labels, sg.lambda);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFiniteLoss) throw;
        throw Error(ErrorCode::DivergedLoss, "epoch " + std::to_string(epoch) + ": " + e.what());
      }
      const double batch_loss = lr.loss / static_cast<double>(sampler.train_nodes().size());
      if (!std::isfinite(batch_loss)) throw Error(ErrorCode::DivergedLoss, "non-finite minibatch loss");
      sgd_step(model, lr.gradients, step);
      result.record.minibatch_losses.push_back(batch_loss);
      loss_sum += batch_loss;
      if (observer) {
        TrainEvent ev;
        ev.kind = TrainEvent::Kind::Minibatch;
        ev.seed = config.seed;
        ev.epoch = epoch;
        ev.minibatch = mb + 1;
        ev.loss = batch_loss;
        ev.subgraph_nodes = sg.node_ids.size();
        observer(ev);
      }
    }

    SageModel snapshot = model;
    round_to_float(snapshot);
    const ThresholdResult tuned = tune_threshold(snapshot, graph, validation_nodes, config.threshold);
    snapshot.threshold = tuned.threshold;

    EpochRecord rec;
    rec.epoch = epoch;
    rec.mean_loss = loss_sum / static_cast<double>(config.minibatches_per_epoch);
    rec.validation_score = tuned.score;
    rec.threshold = tuned.threshold;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.record.epochs.push_back(rec);
    if (observer) {
      TrainEvent ev;
      ev.kind = TrainEvent::Kind::Epoch;
      ev.seed = config.seed;
      ev.epoch = epoch;
      ev.loss = rec.mean_loss;
      ev.validation_score = rec.validation_score;
      ev.threshold = rec.threshold;
      observer(ev);
    }

    if (!have_best || tuned.score > result.record.best_score) {
      have_best = true;
      best = std::move(snapshot);
      result.record.best_score = tuned.score;
      result.record.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  result.model = std::move(best);
  return result;
}

SeedSelection run_seeds(const GateGraph& graph, const TrainConfig& config, std::span<const std::uint64_t> seeds,
                        std::span<const NodeId> validation_nodes, std::size_t jobs, const TrainObserver& observer) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidConfig, "seed list is empty");
  std::vector<std::optional<TrainResult>> results(seeds.size());
  std::mutex observer_mutex;
  TrainObserver guarded;
  if (observer) {
    guarded = [&](const TrainEvent& ev) {
      std::lock_guard lock(observer_mutex);
      observer(ev);
    };
  }
  auto run_one = [&](std::size_t i) {
    TrainConfig cfg = config;
    cfg.seed = seeds[i];
    results[i] = train(graph, cfg, validation_nodes, guarded);
  };

  if (jobs <= 1 || seeds.size() == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < std::min(jobs, seeds.size()); ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }

  SeedSelection sel;
  std::size_t best = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& rec = results[i]->record;
    sel.runs.push_back({seeds[i], rec.best_score, rec.best_epoch, rec.non_train_touches, rec.test_node_touches});
    const auto& cur = results[best]->record;
    if (rec.best_score > cur.best_score || (rec.best_score == cur.best_score && seeds[i] < seeds[best])) best = i;
  }
  sel.seed = seeds[best];
  sel.best = std::move(*results[best]);
  return sel;
}

SeedSelection run_seeds(const GateGraph& graph, const TrainConfig& config, std::span<const std::uint64_t> seeds,
                        std::size_t jobs, const TrainObserver& observer) {
  const auto validation = graph.nodes_with_role(Role::Validation);
  return run_seeds(graph, config, seeds, validation, jobs, observer);
}

}  // namespace tskit
