#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tskit/trainer.hpp"

namespace tskit {

// Everything an experiment run needs besides the data.
struct RunConfig {
  TrainConfig train;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5};
  std::uint64_t split_seed = 0;  // random validation draw of the practical protocol
  std::size_t jobs = 1;          // seeds trained concurrently; does not affect results
};

// Reads a TOML document. Recognised layout (all keys optional):
//
//   epochs = 100
//   minibatches_per_epoch = 20
//   learning_rate = 0.1
//   hidden = [256, 256]
//   seed = 0
//   patience = 20
//   standardize = false
//   [sampler]    num_roots, walk_length, presample_rounds
//   [threshold]  lower, upper, steps
//   [experiment] seeds, split_seed, jobs
//
// Unknown keys, wrong types and out-of-range values raise InvalidConfig.
// Only the TOML subset needed here is supported: tables, dotted keys,
// strings, integers, floats, booleans and arrays.
RunConfig parse_run_config(std::string_view toml);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical TOML rendering; parse_run_config(to_toml(c)) == c.
std::string to_toml(const RunConfig& config);

// Canonical single-line JSON rendering, used as the config echo in reports
// and checkpoints.
std::string to_json(const RunConfig& config);

bool operator==(const TrainConfig& a, const TrainConfig& b);
bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace tskit
