#pragma once

#include <string>
#include <vector>

namespace tskit {

struct PinConnection {
  std::string pin;
  std::string net;

  bool operator==(const PinConnection&) const = default;
};

// One library-cell instance. `family` is the functional gate group resolved
// at parse time (library profile rule, else a name heuristic); it feeds the
// one-hot gate-type feature.
struct Cell {
  std::string instance_name;
  std::string cell_type;
  std::string family;
  std::vector<PinConnection> input_pins;
  std::vector<PinConnection> output_pins;

  bool sink_only() const noexcept { return output_pins.empty(); }
  bool operator==(const Cell&) const = default;
};

// Flattened structural design. Net identifiers are scalar: bus bits appear
// as "name[i]", escaped identifiers without the leading backslash, and tied
// constants as "1'b0" / "1'b1".
struct Netlist {
  std::string name;
  std::vector<Cell> cells;
  std::vector<std::string> nets;
  std::vector<std::string> primary_inputs;
  std::vector<std::string> primary_outputs;

  bool operator==(const Netlist&) const = default;
};

inline constexpr const char* kConstZeroNet = "1'b0";
inline constexpr const char* kConstOneNet = "1'b1";

inline bool is_constant_net(const std::string& net) {
  return net == kConstZeroNet || net == kConstOneNet;
}

}  // namespace tskit
