#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tskit {

// Column layout of the node feature matrix: one-hot gate family (last slot
// is OTHER) followed by four raw scalar slots.
struct FeatureSchema {
  enum Scalar : std::size_t { kInDegree = 0, kOutDegree, kDistToPI, kDistToPO, kScalarCount };

  std::vector<std::string> gate_families;

  static FeatureSchema default_schema();

  std::size_t width() const noexcept { return gate_families.size() + kScalarCount; }
  std::size_t scalar_column(Scalar s) const noexcept { return gate_families.size() + s; }
  // Case-insensitive; families outside the vocabulary map to OTHER.
  std::size_t family_slot(std::string_view family) const;
  std::vector<std::string> column_names() const;
  std::uint64_t fingerprint() const;

  // Nonempty, unique, upper-case, last entry OTHER. Throws MalformedSchema.
  void validate() const;

  bool operator==(const FeatureSchema&) const = default;
};

inline constexpr const char* kOtherFamily = "OTHER";

std::string schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(std::string_view text);
FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::string to_hex(std::uint64_t value);

}  // namespace tskit
