#pragma once

#include <filesystem>
#include <string_view>

#include "tskit/library_profile.hpp"
#include "tskit/netlist.hpp"

namespace tskit {

struct ParseOptions {
  // Reject pins the library profile cannot classify instead of falling back
  // to the Y/Z/Q/QN naming heuristic.
  bool strict = false;
};

// Parses one flattened structural Verilog module.
//
// Accepted: module header (ANSI or not), input/output/inout/wire declarations
// with optional ranges, cell instantiations with named or positional
// connections, plain net-alias `assign a = b;`. Buses are bit-blasted and
// escaped identifiers lose their backslash, so `\n[3] ` and `n[3]` name the
// same scalar net. Behavioural constructs raise UnsupportedConstruct.
Netlist parse_netlist(std::string_view source, const LibraryProfile& profile,
                      const ParseOptions& options = {});

Netlist parse_netlist_file(const std::filesystem::path& path, const LibraryProfile& profile,
                           const ParseOptions& options = {});

}  // namespace tskit
