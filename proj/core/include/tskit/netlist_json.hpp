#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tskit/netlist.hpp"

namespace tskit {

// Canonical interchange text: a JSON object with keys
// `name, cells[], nets[], primary_inputs[], primary_outputs[]`. Each cell is
// `{"instance", "type", "family", "inputs": [[pin, net]...], "outputs": [...]}`.
// Output is deterministic (fixed key order, two-space indent).
std::string netlist_to_json(const Netlist& netlist);

// Loads and validates the interchange text (every pin references a declared
// net, instance names unique, no duplicate pins).
Netlist netlist_from_json(std::string_view text);

void save_netlist(const Netlist& netlist, const std::filesystem::path& path);
Netlist load_netlist(const std::filesystem::path& path);

// Checks the structural invariants; throws MalformedNetlist.
void validate_netlist(const Netlist& netlist);

}  // namespace tskit
