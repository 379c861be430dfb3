#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tskit/sage_model.hpp"
#include "tskit/sampler.hpp"

namespace tskit {

struct CheckpointMeta {
  SamplerConfig sampler;
  std::uint64_t seed = 0;
  std::string config;  // free-form training configuration echo
};

// File layout: one line of JSON header, a newline, then the parameter blob.
// The header records format version, schema fingerprint, layer widths, the
// tuned threshold, sampler settings, seed, feature scaler and the parameter
// table (name, rows, cols, offset). The blob holds every parameter as a
// little-endian IEEE-754 float32 in header order, each tensor row-major.
void save_checkpoint(const std::filesystem::path& path, const SageModel& model, const CheckpointMeta& meta);

struct Checkpoint {
  SageModel model;
  CheckpointMeta meta;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string encode_checkpoint(const SageModel& model, const CheckpointMeta& meta);
Checkpoint decode_checkpoint(const std::string& bytes);

}  // namespace tskit
