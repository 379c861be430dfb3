#include <benchmark/benchmark.h>

#include "tskit/graph_builder.hpp"
#include "tskit/labels.hpp"
#include "tskit/library_profile.hpp"
#include "tskit/netlist_parser.hpp"
#include "tskit/synth.hpp"

namespace {

tskit::SynthDesign design(std::size_t gates) {
  tskit::SynthOptions o;
  o.benign_gates = gates;
  o.style = tskit::SynthStyle::Mixed;
  return tskit::synthesize_design(o);
}

void BM_ParseNetlist(benchmark::State& state) {
  const auto d = design(static_cast<std::size_t>(state.range(0)));
  const auto profile = tskit::LibraryProfile::parse(tskit::generic_library_profile());
  for (auto _ : state) benchmark::DoNotOptimize(tskit::parse_netlist(d.verilog, profile));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * d.verilog.size()));
}
BENCHMARK(BM_ParseNetlist)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
  const auto d = design(static_cast<std::size_t>(state.range(0)));
  const auto profile = tskit::LibraryProfile::parse(tskit::generic_library_profile());
  const auto n = tskit::parse_netlist(d.verilog, profile);
  const std::vector<tskit::DesignInput> in{{&n, tskit::Role::Train}};
  const auto schema = tskit::FeatureSchema::default_schema();
  for (auto _ : state) benchmark::DoNotOptimize(tskit::build_graph(in, schema, tskit::LabelRule{}));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n.cells.size()));
}
BENCHMARK(BM_BuildGraph)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
