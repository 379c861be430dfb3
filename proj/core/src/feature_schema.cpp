#include "tskit/feature_schema.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tskit/error.hpp"

namespace tskit {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) noexcept {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

FeatureSchema FeatureSchema::default_schema() {
  return FeatureSchema{{"AND", "NAND", "OR", "NOR", "XOR", "XNOR", "INV", "BUF", "MUX", "DFF",
                        "LATCH", "AOI", "OAI", kOtherFamily}};
}

std::size_t FeatureSchema::family_slot(std::string_view family) const {
  const std::string key = upper(family);
  const auto it = std::find(gate_families.begin(), gate_families.end() - 1, key);
  return it == gate_families.end() - 1 ? gate_families.size() - 1
                                       : static_cast<std::size_t>(it - gate_families.begin());
}

std::vector<std::string> FeatureSchema::column_names() const {
  std::vector<std::string> cols;
  for (const auto& f : gate_families) cols.push_back("fam_" + f);
  cols.insert(cols.end(), {"in_degree", "out_degree", "dist_to_pi", "dist_to_po"});
  return cols;
}

std::uint64_t FeatureSchema::fingerprint() const {
  std::string canon = "tskit-schema-v1|";
  for (const auto& c : column_names()) {
    canon += c;
    canon += ',';
  }
  return fnv1a64(canon);
}

void FeatureSchema::validate() const {
  if (gate_families.empty()) throw Error(ErrorCode::MalformedSchema, "empty family list");
  if (gate_families.back() != kOtherFamily) {
    throw Error(ErrorCode::MalformedSchema, "last gate family must be OTHER");
  }
  std::set<std::string> seen;
  for (const auto& f : gate_families) {
    if (f.empty() || f != upper(f)) {
      throw Error(ErrorCode::MalformedSchema, "family names must be non-empty upper case: '" + f + "'");
    }
    if (!seen.insert(f).second) throw Error(ErrorCode::MalformedSchema, "duplicate family '" + f + "'");
  }
}

std::string schema_to_json(const FeatureSchema& schema) {
  nlohmann::ordered_json j;
  j["gate_families"] = schema.gate_families;
  j["scalar_slots"] = {"in_degree", "out_degree", "dist_to_pi", "dist_to_po"};
  j["width"] = schema.width();
  j["fingerprint"] = to_hex(schema.fingerprint());
  return j.dump(2) + "\n";
}

FeatureSchema schema_from_json(std::string_view text) {
  FeatureSchema schema;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& f : j.at("gate_families")) schema.gate_families.push_back(upper(f.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedSchema, e.what());
  }
  if (schema.gate_families.empty() || schema.gate_families.back() != kOtherFamily) {
    schema.gate_families.erase(
        std::remove(schema.gate_families.begin(), schema.gate_families.end(), kOtherFamily),
        schema.gate_families.end());
    schema.gate_families.push_back(kOtherFamily);
  }
  schema.validate();
  return schema;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open schema " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return schema_from_json(buf.str());
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << schema_to_json(schema);
}

}  // namespace tskit
