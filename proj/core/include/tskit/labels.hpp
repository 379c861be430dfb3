#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tskit/netlist.hpp"

namespace tskit {

struct GateGraph;

// A gate is a Trojan gate iff its instance name contains one of `patterns`
// (case-insensitive) or is listed for its design in `explicit_gates`.
struct LabelRule {
  std::vector<std::string> patterns{"troj", "tj"};
  std::map<std::string, std::vector<std::string>> explicit_gates;

  // {"patterns": [...], "explicit": {design: [names]}, "explicit_files": {design: path}}
  // Relative explicit_files paths resolve against `base_dir`.
  static LabelRule from_json(std::string_view text, const std::filesystem::path& base_dir = {});
  static LabelRule load(const std::filesystem::path& path);
};

// One instance name per line; blank lines and '#' comments ignored.
std::vector<std::string> read_gate_list(const std::filesystem::path& path);

std::vector<std::uint8_t> derive_labels(const Netlist& netlist, const LabelRule& rule);

struct ImbalanceEntry {
  std::string design;
  std::size_t trojan = 0;
  std::size_t benign = 0;
  double ratio = 0.0;
};

struct ImbalanceReport {
  std::vector<ImbalanceEntry> per_design;
  ImbalanceEntry aggregate;  // design = "*"
};

// trojan / benign; 0 when there are no Trojan gates, +inf when there are no
// benign ones.
double imbalance_ratio(std::size_t trojan, std::size_t benign) noexcept;

ImbalanceReport compute_imbalance(const GateGraph& graph);

}  // namespace tskit
