#include "tskit/library_profile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tskit/error.hpp"

namespace tskit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool starts_with_any(std::string_view s, std::initializer_list<std::string_view> prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(),
                     [&](std::string_view p) { return s.starts_with(p); });
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) noexcept {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string_view::npos, resume = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      resume = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++resume;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::size_t CellRule::literal_prefix_length() const noexcept {
  const auto pos = pattern.find_first_of("*?");
  return pos == std::string::npos ? pattern.size() : pos;
}

bool CellRule::has_literal_pins() const noexcept {
  return !pins.empty() && std::none_of(pins.begin(), pins.end(), [](const PinRule& r) {
    return r.pattern.find_first_of("*?") != std::string::npos;
  });
}

LibraryProfile::LibraryProfile(std::vector<CellRule> rules) : rules_(std::move(rules)) {
  std::set<std::string> seen;
  for (const auto& rule : rules_) {
    if (!seen.insert(rule.pattern).second) {
      throw Error(ErrorCode::MalformedProfile, "duplicate cell_type entry '" + rule.pattern + "'",
                  rule.line);
    }
  }
}

LibraryProfile LibraryProfile::parse(std::string_view text) {
  std::vector<CellRule> rules;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::MalformedProfile, "expected 'PATTERN: ...'", line_no);
    }
    CellRule rule;
    rule.line = line_no;
    rule.pattern = std::string(trim(line.substr(0, colon)));
    if (rule.pattern.empty()) {
      throw Error(ErrorCode::MalformedProfile, "empty cell_type pattern", line_no);
    }

    std::string body(line.substr(colon + 1));
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream fields(body);
    std::string field;
    std::set<std::string> pin_patterns;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == field.size()) {
        throw Error(ErrorCode::MalformedProfile, "expected key=value, got '" + field + "'", line_no);
      }
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "family") {
        rule.family = value;
        continue;
      }
      PinRule pin{key, PinDirection::Input};
      const std::string dir = lower(value);
      if (dir == "in" || dir == "input") {
        pin.direction = PinDirection::Input;
      } else if (dir == "out" || dir == "output") {
        pin.direction = PinDirection::Output;
      } else {
        throw Error(ErrorCode::MalformedProfile, "unknown pin direction '" + value + "'", line_no);
      }
      if (!pin_patterns.insert(key).second) {
        throw Error(ErrorCode::MalformedProfile, "duplicate pin '" + key + "'", line_no);
      }
      rule.pins.push_back(std::move(pin));
    }
    rules.push_back(std::move(rule));
  }
  return LibraryProfile(std::move(rules));
}

const CellRule* LibraryProfile::match(std::string_view cell_type) const {
  const CellRule* best = nullptr;
  bool tied = false;
  for (const auto& rule : rules_) {
    if (!glob_match(rule.pattern, cell_type)) continue;
    if (best == nullptr || rule.literal_prefix_length() > best->literal_prefix_length()) {
      best = &rule;
      tied = false;
    } else if (rule.literal_prefix_length() == best->literal_prefix_length()) {
      tied = true;
    }
  }
  if (tied) {
    throw Error(ErrorCode::MalformedProfile,
                "ambiguous rules for cell type '" + std::string(cell_type) + "'", best->line);
  }
  return best;
}

std::optional<PinDirection> LibraryProfile::classify_pin(std::string_view cell_type,
                                                         std::string_view pin) const {
  const CellRule* rule = match(cell_type);
  if (rule == nullptr) return std::nullopt;
  for (const auto& p : rule->pins) {
    if (glob_match(p.pattern, pin)) return p.direction;
  }
  return std::nullopt;
}

LibraryProfile load_library_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open library profile " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return LibraryProfile::parse(buf.str());
}

PinDirection heuristic_pin_direction(std::string_view pin) noexcept {
  std::string p;
  for (char c : pin) p.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (p == "Y" || p == "Z" || p == "Q" || p == "QN") return PinDirection::Output;
  return PinDirection::Input;
}

std::string heuristic_family(std::string_view cell_type) {
  const std::string t = lower(cell_type);
  if (t.starts_with("aoi")) return "AOI";
  if (t.starts_with("oai")) return "OAI";
  if (t.find("xnor") != std::string::npos || t.starts_with("xnr")) return "XNOR";
  if (t.find("xor") != std::string::npos) return "XOR";
  if (starts_with_any(t, {"nand", "nnd"})) return "NAND";
  if (t.starts_with("nor")) return "NOR";
  if (t.starts_with("and")) return "AND";
  if (t.starts_with("or")) return "OR";
  if (starts_with_any(t, {"mux", "mx"})) return "MUX";
  if (starts_with_any(t, {"inv", "not", "hi", "ib"}) ||
      (t.size() > 1 && t[0] == 'i' && std::isdigit(static_cast<unsigned char>(t[1])))) {
    return "INV";
  }
  if (starts_with_any(t, {"buf", "nb"})) return "BUF";
  if (t.find("dff") != std::string::npos || t.starts_with("ff")) return "DFF";
  if (t.find("lat") != std::string::npos) return "LATCH";
  return {};
}

}  // namespace tskit
