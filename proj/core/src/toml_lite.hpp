#pragma once

#include <string_view>

#include "json.hpp"

namespace tskit::detail {

// Parses the TOML subset described in config.hpp into a JSON tree. Integers
// become JSON integers, floats JSON floats. Errors raise InvalidConfig with
// the offending line.
nlohmann::ordered_json parse_toml(std::string_view text);

}  // namespace tskit::detail
