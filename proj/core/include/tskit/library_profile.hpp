#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tskit {

enum class PinDirection { Input, Output };

struct PinRule {
  std::string pattern;  // glob over pin names ('*' and '?')
  PinDirection direction;
};

struct CellRule {
  std::string pattern;  // glob over cell types
  std::vector<PinRule> pins;
  std::string family;   // empty when the rule does not name one
  std::size_t line = 0;

  // Characters before the first wildcard; used to rank overlapping rules.
  std::size_t literal_prefix_length() const noexcept;
  bool has_literal_pins() const noexcept;
};

// Maps library cell types to pin directions and gate families.
//
// Text format, one rule per line ('#' starts a comment):
//
//   PATTERN: pin=dir, pin=dir ... family=NAME
//
// where dir is `in` or `out`. When several rules match a cell type the one
// with the longest literal prefix wins; equally specific matches are a
// MalformedProfile error.
class LibraryProfile {
 public:
  LibraryProfile() = default;
  explicit LibraryProfile(std::vector<CellRule> rules);

  static LibraryProfile parse(std::string_view text);

  const std::vector<CellRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

  // Most specific rule for `cell_type`, or nullptr if none matches.
  const CellRule* match(std::string_view cell_type) const;

  // Direction of `pin` on `cell_type` according to the profile alone.
  std::optional<PinDirection> classify_pin(std::string_view cell_type,
                                           std::string_view pin) const;

 private:
  std::vector<CellRule> rules_;
};

LibraryProfile load_library_profile(const std::filesystem::path& path);

bool glob_match(std::string_view pattern, std::string_view text) noexcept;

// Pins named Y, Z, Q or QN (case-insensitive) are outputs; all others inputs.
PinDirection heuristic_pin_direction(std::string_view pin) noexcept;

// Gate family guessed from a cell-type name ("NAND4X2" -> "NAND"); empty if
// nothing recognisable is found.
std::string heuristic_family(std::string_view cell_type);

}  // namespace tskit
