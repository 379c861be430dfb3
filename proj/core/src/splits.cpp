#include "tskit/splits.hpp"

#include <algorithm>
#include <cctype>

#include "tskit/error.hpp"
#include "tskit/random.hpp"

namespace tskit {

namespace {

std::vector<std::string> others_of(std::span<const std::string> designs, const std::string& test) {
  if (std::find(designs.begin(), designs.end(), test) == designs.end()) {
    throw Error(ErrorCode::UnknownDesign, "test design '" + test + "' is not in the corpus");
  }
  std::vector<std::string> others;
  for (const auto& d : designs) {
    if (d != test) others.push_back(d);
  }
  std::sort(others.begin(), others.end());
  if (std::adjacent_find(others.begin(), others.end()) != others.end()) {
    throw Error(ErrorCode::DuplicateDesign, "corpus lists a design twice");
  }
  return others;
}

}  // namespace

std::string_view to_string(Protocol p) noexcept { return p == Protocol::Practical ? "practical" : "relaxed"; }

Protocol protocol_from_string(std::string_view s) {
  if (s == "practical") return Protocol::Practical;
  if (s == "relaxed") return Protocol::Relaxed;
  throw Error(ErrorCode::InvalidConfig, "unknown protocol '" + std::string(s) + "'");
}

std::vector<std::string> SplitPlan::designs_with_role(Role role) const {
  std::vector<std::string> out;
  for (const auto& [d, r] : assignments) {
    if (r == role) out.push_back(d);
  }
  return out;
}

std::string design_family(std::string_view design) {
  std::size_t end = design.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(design[end - 1]))) --end;
  if (end == design.size() || end == 0) return std::string(design);
  if (design[end - 1] != 't' && design[end - 1] != 'T') return std::string(design);
  if (end == 1) return std::string(design);
  return std::string(design.substr(0, end - 1));
}

SplitPlan make_practical_split(std::span<const std::string> designs, const std::string& test_design,
                               std::uint64_t seed) {
  const auto others = others_of(designs, test_design);
  if (others.size() < 3) {
    throw Error(ErrorCode::InsufficientDesigns,
                "practical protocol needs at least 3 designs besides the test design, got " +
                    std::to_string(others.size()));
  }
  SplitPlan plan;
  plan.test_design = test_design;
  plan.protocol = Protocol::Practical;
  plan.seed = seed;

  const std::string family = design_family(test_design);
  std::vector<std::string> validation;
  for (const auto& d : others) {
    if (design_family(d) == family) validation.push_back(d);
  }
  if (validation.empty()) {
    // Partial Fisher-Yates over the sorted candidates.
    std::vector<std::string> pool = others;
    Rng rng(seed);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    validation.assign(pool.begin(), pool.begin() + 3);
    std::sort(validation.begin(), validation.end());
    plan.random_validation = true;
  }

  std::size_t train_count = 0;
  for (const auto& d : others) {
    const bool val = std::binary_search(validation.begin(), validation.end(), d);
    plan.assignments.emplace_back(d, val ? Role::Validation : Role::Train);
    if (!val) ++train_count;
  }
  plan.assignments.emplace_back(test_design, Role::Test);
  if (train_count == 0) throw Error(ErrorCode::NoTrainDesigns, "no designs left for training");
  return plan;
}

SplitPlan make_relaxed_split(std::span<const std::string> designs, const std::string& test_design) {
  const auto others = others_of(designs, test_design);
  if (others.empty()) throw Error(ErrorCode::NoTrainDesigns, "no designs left for training");
  SplitPlan plan;
  plan.test_design = test_design;
  plan.protocol = Protocol::Relaxed;
  for (const auto& d : others) plan.assignments.emplace_back(d, Role::Train);
  plan.assignments.emplace_back(test_design, Role::Validation);
  plan.assignments.emplace_back(test_design, Role::Test);
  return plan;
}

}  // namespace tskit
