#include "tskit/netlist_json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "tskit/error.hpp"

namespace tskit {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json pins_to_json(const std::vector<PinConnection>& pins) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pins) arr.push_back(ordered_json::array({p.pin, p.net}));
  return arr;
}

std::vector<PinConnection> pins_from_json(const ordered_json& arr) {
  std::vector<PinConnection> pins;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2) {
      throw Error(ErrorCode::MalformedNetlist, "pin entry must be [pin, net]");
    }
    pins.push_back({item[0].get<std::string>(), item[1].get<std::string>()});
  }
  return pins;
}

}  // namespace

void validate_netlist(const Netlist& netlist) {
  std::unordered_set<std::string> nets;
  for (const auto& n : netlist.nets) {
    if (!nets.insert(n).second) throw Error(ErrorCode::MalformedNetlist, "duplicate net '" + n + "'");
  }
  for (const auto* ports : {&netlist.primary_inputs, &netlist.primary_outputs}) {
    for (const auto& p : *ports) {
      if (!nets.count(p)) throw Error(ErrorCode::MalformedNetlist, "port '" + p + "' is not a net");
    }
  }
  std::unordered_set<std::string> instances;
  for (const auto& cell : netlist.cells) {
    if (!instances.insert(cell.instance_name).second) {
      throw Error(ErrorCode::MalformedNetlist, "duplicate instance '" + cell.instance_name + "'");
    }
    std::set<std::string> pins;
    for (const auto* list : {&cell.input_pins, &cell.output_pins}) {
      for (const auto& p : *list) {
        if (!pins.insert(p.pin).second) {
          throw Error(ErrorCode::MalformedNetlist,
                      "duplicate pin '" + p.pin + "' on '" + cell.instance_name + "'");
        }
        if (!nets.count(p.net)) {
          throw Error(ErrorCode::MalformedNetlist,
                      "instance '" + cell.instance_name + "' references unknown net '" + p.net + "'");
        }
      }
    }
  }
}

std::string netlist_to_json(const Netlist& netlist) {
  ordered_json j;
  j["name"] = netlist.name;
  ordered_json cells = ordered_json::array();
  for (const auto& c : netlist.cells) {
    ordered_json cj;
    cj["instance"] = c.instance_name;
    cj["type"] = c.cell_type;
    cj["family"] = c.family;
    cj["inputs"] = pins_to_json(c.input_pins);
    cj["outputs"] = pins_to_json(c.output_pins);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  j["nets"] = netlist.nets;
  j["primary_inputs"] = netlist.primary_inputs;
  j["primary_outputs"] = netlist.primary_outputs;
  return j.dump(2) + "\n";
}

Netlist netlist_from_json(std::string_view text) {
  Netlist n;
  try {
    const auto j = ordered_json::parse(text);
    n.name = j.at("name").get<std::string>();
    for (const auto& cj : j.at("cells")) {
      Cell c;
      c.instance_name = cj.at("instance").get<std::string>();
      c.cell_type = cj.at("type").get<std::string>();
      c.family = cj.value("family", std::string{});
      c.input_pins = pins_from_json(cj.at("inputs"));
      c.output_pins = pins_from_json(cj.at("outputs"));
      n.cells.push_back(std::move(c));
    }
    n.nets = j.at("nets").get<std::vector<std::string>>();
    n.primary_inputs = j.at("primary_inputs").get<std::vector<std::string>>();
    n.primary_outputs = j.at("primary_outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedNetlist, e.what());
  }
  validate_netlist(n);
  return n;
}

void save_netlist(const Netlist& netlist, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << netlist_to_json(netlist);
}

Netlist load_netlist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return netlist_from_json(buf.str());
}

}  // namespace tskit
