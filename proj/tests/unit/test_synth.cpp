#include <gtest/gtest.h>

#include <algorithm>

#include "tskit/error.hpp"
#include "tskit/graph_builder.hpp"
#include "tskit/labels.hpp"
#include "tskit/library_profile.hpp"
#include "tskit/netlist_parser.hpp"
#include "tskit/synth.hpp"

using namespace tskit;

namespace {

Netlist parse_synth(const SynthDesign& d) {
  const auto profile = LibraryProfile::parse(generic_library_profile());
  ParseOptions opts;
  opts.strict = true;
  return parse_netlist(d.verilog, profile, opts);
}

}  // namespace

TEST(Synth, DeterministicForFixedOptions) {
  SynthOptions o;
  o.seed = 5;
  o.style = SynthStyle::Mixed;
  EXPECT_EQ(synthesize_design(o).verilog, synthesize_design(o).verilog);
  auto other = o;
  other.seed = 6;
  EXPECT_NE(synthesize_design(o).verilog, synthesize_design(other).verilog);
}

TEST(Synth, TrojanSizeFollowsTriggerWidth) {
  for (std::size_t w = 4; w <= 10; ++w) {
    SynthOptions o;
    o.trigger_width = w;
    o.benign_gates = 80;
    const auto d = synthesize_design(o);
    EXPECT_GE(d.trojan_instances.size(), 6u);
    EXPECT_LE(d.trojan_instances.size(), 15u);
    const auto n = parse_synth(d);
    const auto labels = derive_labels(n, LabelRule{});
    EXPECT_EQ(static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1)), d.trojan_instances.size());
    EXPECT_EQ(n.cells.size(), d.gate_count);
  }
  SynthOptions none;
  none.trigger_width = 0;
  EXPECT_TRUE(synthesize_design(none).trojan_instances.empty());
  none.trigger_width = 3;
  EXPECT_THROW(synthesize_design(none), Error);
}

TEST(Synth, EveryStyleParsesToTheSameCircuitSize) {
  for (auto style : {SynthStyle::Named, SynthStyle::Bus, SynthStyle::Escaped, SynthStyle::Positional,
                     SynthStyle::Mixed}) {
    for (bool extras : {false, true}) {
      SynthOptions o;
      o.style = style;
      o.extras = extras;
      o.benign_gates = 60;
      const auto d = synthesize_design(o);
      const auto n = parse_synth(d);
      EXPECT_EQ(n.name, o.name);
      EXPECT_EQ(n.cells.size(), d.gate_count);
      for (const auto& t : d.trojan_instances) {
        EXPECT_TRUE(std::any_of(n.cells.begin(), n.cells.end(),
                                [&](const Cell& c) { return c.instance_name == t; }))
            << t;
      }
    }
  }
}

TEST(Synth, DefaultCorpusIsDeskScale) {
  const auto plan = default_corpus_plan();
  ASSERT_EQ(plan.size(), 4u);
  for (const auto& o : plan) {
    const auto d = synthesize_design(o);
    const std::size_t benign = d.gate_count - d.trojan_instances.size();
    EXPECT_GE(benign, 200u) << o.name;
    EXPECT_LE(benign, 600u) << o.name;
    EXPECT_GE(d.trojan_instances.size(), 5u);
    EXPECT_LE(d.trojan_instances.size(), 15u);
  }
}

TEST(Synth, PlantedTrojanIsConnected) {
  SynthOptions o;
  o.benign_gates = 120;
  const auto n = parse_synth(synthesize_design(o));
  const auto conn = analyze_connectivity(n);
  const auto labels = derive_labels(n, LabelRule{});
  for (std::size_t i = 0; i < n.cells.size(); ++i) {
    if (!labels[i]) continue;
    EXPECT_FALSE(conn.neighbors[i].empty()) << n.cells[i].instance_name;
    EXPECT_GT(conn.dist_to_po[i], 0u) << n.cells[i].instance_name;
  }
}
