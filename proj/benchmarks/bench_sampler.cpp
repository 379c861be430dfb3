#include <benchmark/benchmark.h>

#include "tskit/graph_builder.hpp"
#include "tskit/labels.hpp"
#include "tskit/library_profile.hpp"
#include "tskit/netlist_parser.hpp"
#include "tskit/sampler.hpp"
#include "tskit/synth.hpp"

namespace {

tskit::GateGraph graph(std::size_t gates) {
  tskit::SynthOptions o;
  o.benign_gates = gates;
  const auto profile = tskit::LibraryProfile::parse(tskit::generic_library_profile());
  const auto n = tskit::parse_netlist(tskit::synthesize_design(o).verilog, profile);
  const std::vector<tskit::DesignInput> in{{&n, tskit::Role::Train}};
  return tskit::build_graph(in, tskit::FeatureSchema::default_schema(), tskit::LabelRule{});
}

void BM_SampleSubgraph(benchmark::State& state) {
  const auto g = graph(static_cast<std::size_t>(state.range(0)));
  const tskit::RandomWalkSampler sampler(g, tskit::SamplerConfig{});
  tskit::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng));
}
BENCHMARK(BM_SampleSubgraph)->Arg(500)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_EstimateNormalization(benchmark::State& state) {
  const auto g = graph(static_cast<std::size_t>(state.range(0)));
  const tskit::RandomWalkSampler sampler(g, tskit::SamplerConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(sampler.estimate_normalization());
}
BENCHMARK(BM_EstimateNormalization)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
