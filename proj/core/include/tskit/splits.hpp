#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tskit/gate_graph.hpp"

namespace tskit {

enum class Protocol { Practical, Relaxed };

std::string_view to_string(Protocol p) noexcept;
Protocol protocol_from_string(std::string_view s);  // InvalidConfig on anything else

struct SplitPlan {
  std::string test_design;
  Protocol protocol = Protocol::Practical;
  // Every corpus design with its role(s). Under the relaxed protocol the test
  // design is listed twice, as Validation and as Test.
  std::vector<std::pair<std::string, Role>> assignments;
  std::uint64_t seed = 0;        // seed of the random validation draw
  bool random_validation = false;  // validation designs came from that draw

  std::vector<std::string> designs_with_role(Role role) const;
};

// Base-circuit name: the prefix before a trailing "t<digits>" variant tag
// ("rs232t1000" -> "rs232", "s15850t100" -> "s15850"). Names without the tag
// are their own family.
std::string design_family(std::string_view design);

// Test design alone in the test role; its family members validate; the rest
// train. A test design without relatives gets three validation designs drawn
// uniformly with `seed`.
SplitPlan make_practical_split(std::span<const std::string> designs, const std::string& test_design,
                               std::uint64_t seed = 0);

// Test design doubles as validation; everything else trains.
SplitPlan make_relaxed_split(std::span<const std::string> designs, const std::string& test_design);

}  // namespace tskit
