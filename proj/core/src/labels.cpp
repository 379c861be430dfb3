#include "tskit/labels.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "tskit/error.hpp"
#include "tskit/gate_graph.hpp"

namespace tskit {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::vector<std::string> read_gate_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open gate list " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name;
    if (fields >> name) names.push_back(name[0] == '\\' ? name.substr(1) : name);
  }
  return names;
}

LabelRule LabelRule::from_json(std::string_view text, const std::filesystem::path& base_dir) {
  LabelRule rule;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("patterns")) rule.patterns = j["patterns"].get<std::vector<std::string>>();
    if (j.contains("explicit")) {
      for (const auto& [design, names] : j["explicit"].items()) {
        rule.explicit_gates[design] = names.get<std::vector<std::string>>();
      }
    }
    if (j.contains("explicit_files")) {
      for (const auto& [design, file] : j["explicit_files"].items()) {
        std::filesystem::path p = file.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        auto& list = rule.explicit_gates[design];
        for (auto& n : read_gate_list(p)) list.push_back(std::move(n));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("label rule: ") + e.what());
  }
  return rule;
}

LabelRule LabelRule::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open label rule " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), path.parent_path());
}

std::vector<std::uint8_t> derive_labels(const Netlist& netlist, const LabelRule& rule) {
  std::vector<std::string> patterns;
  for (const auto& p : rule.patterns) patterns.push_back(lower(p));

  std::unordered_set<std::string> listed;
  if (const auto it = rule.explicit_gates.find(netlist.name); it != rule.explicit_gates.end()) {
    std::unordered_set<std::string> present;
    for (const auto& c : netlist.cells) present.insert(c.instance_name);
    for (const auto& name : it->second) {
      if (!present.count(name)) {
        throw Error(ErrorCode::LabelFileMismatch,
                    "gate '" + name + "' listed for '" + netlist.name + "' is not in the netlist");
      }
      listed.insert(name);
    }
  }

  std::vector<std::uint8_t> labels;
  labels.reserve(netlist.cells.size());
  for (const auto& c : netlist.cells) {
    const std::string name = lower(c.instance_name);
    const bool hit = listed.count(c.instance_name) ||
                     std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
                       return !p.empty() && name.find(p) != std::string::npos;
                     });
    labels.push_back(hit ? 1 : 0);
  }
  return labels;
}

double imbalance_ratio(std::size_t trojan, std::size_t benign) noexcept {
  if (trojan == 0) return 0.0;
  if (benign == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(trojan) / static_cast<double>(benign);
}

ImbalanceReport compute_imbalance(const GateGraph& graph) {
  ImbalanceReport report;
  report.aggregate.design = "*";
  for (const auto& design : graph.design_names()) {
    ImbalanceEntry e;
    e.design = design;
    for (NodeId u : graph.nodes_of_design(design)) {
      (graph.labels[u] ? e.trojan : e.benign) += 1;
    }
    e.ratio = imbalance_ratio(e.trojan, e.benign);
    report.aggregate.trojan += e.trojan;
    report.aggregate.benign += e.benign;
    report.per_design.push_back(std::move(e));
  }
  report.aggregate.ratio = imbalance_ratio(report.aggregate.trojan, report.aggregate.benign);
  return report;
}

}  // namespace tskit
