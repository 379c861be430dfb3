#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tskit {

// How the generated Verilog spells the same circuit.
enum class SynthStyle {
  Named,       // .PIN(net) connections, scalar nets, non-ANSI header
  Bus,         // ANSI header, bus ports and a bus of internal wires
  Escaped,     // escaped identifiers for nets and instances
  Positional,  // ordered connections following the library profile
  Mixed,       // per-instance choice among the above spellings
};

struct SynthOptions {
  std::string name = "synth";
  std::uint64_t seed = 0;
  std::size_t benign_gates = 300;
  // Number of XNOR comparators in the planted trigger, in [4, 10]; the
  // Trojan then has comparators + AND4 tree + one payload gate (6 to 15
  // gates). 0 plants nothing.
  std::size_t trigger_width = 6;
  SynthStyle style = SynthStyle::Named;
  // Adds comments, an attribute, an alias assign and a tied-off constant
  // input; exercises the parser rather than the detector.
  bool extras = false;
};

struct SynthDesign {
  std::string name;
  std::string verilog;
  std::vector<std::string> trojan_instances;  // names as the parser reports them
  std::size_t gate_count = 0;
};

// Benign logic is drawn from AND2/NAND2/OR2/NOR2/XOR2/INV/BUF/MUX2/DFF/
// AOI22/OAI21 cells. The Trojan is a comparator bank of XNOR2 cells over
// existing nets, an AND4 tree combining them into a trigger and an XNOR2
// payload spliced in front of a primary output. Trojan instances are named
// Trojan_*. Output is a deterministic function of the options.
SynthDesign synthesize_design(const SynthOptions& options);

// Profile text for the generated cell library. Pins are listed output first,
// which is also the positional connection order.
std::string generic_library_profile();

// The four-design desk-scale corpus (two circuit families, two variants
// each, 200-600 benign gates).
std::vector<SynthOptions> default_corpus_plan();

// Twenty small designs covering every style, with and without extras.
std::vector<SynthOptions> parser_corpus_plan();

// Writes one <name>.v per design plus generic.profile into `dir`.
void write_corpus(const std::filesystem::path& dir, const std::vector<SynthOptions>& plan);

}  // namespace tskit
