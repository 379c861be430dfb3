#include <benchmark/benchmark.h>

#include "tskit/sage_model.hpp"

namespace {

// Random sparse graph with average degree ~4 and standard-width features.
struct Fixture {
  tskit::Adjacency adjacency;
  tskit::FeatureMatrix x;
  std::vector<std::uint8_t> y;
  tskit::SageModel model;

  Fixture(std::size_t n, std::size_t hidden) {
    tskit::Rng rng(3);
    std::vector<std::vector<tskit::NodeId>> lists(n);
    for (std::size_t e = 0; e < 2 * n; ++e) {
      const auto u = static_cast<tskit::NodeId>(tskit::uniform_index(rng, n));
      const auto v = static_cast<tskit::NodeId>(tskit::uniform_index(rng, n));
      if (u == v) continue;
      lists[u].push_back(v);
      lists[v].push_back(u);
    }
    adjacency = tskit::Adjacency::from_lists(std::move(lists));
    x = tskit::FeatureMatrix::Random(static_cast<Eigen::Index>(n), 18);
    y.resize(n);
    for (auto& v : y) v = tskit::uniform_unit(rng) < 0.05;
    const std::vector<std::size_t> widths{hidden, hidden};
    model = tskit::SageModel::initialize(18, widths, 0, rng);
  }
};

void BM_Forward(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const tskit::GraphView view{&f.adjacency};
  for (auto _ : state) benchmark::DoNotOptimize(tskit::forward(f.model, view, f.x));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_Forward)->Args({1000, 32})->Args({5000, 32})->Args({5000, 256})->Unit(benchmark::kMillisecond);

void BM_LossAndGradients(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const tskit::GraphView view{&f.adjacency};
  for (auto _ : state) benchmark::DoNotOptimize(tskit::loss_and_gradients(f.model, view, f.x, f.y));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_LossAndGradients)->Args({1000, 32})->Args({5000, 32})->Args({5000, 256})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
