#include <gtest/gtest.h>

#include <filesystem>

#include "toy.hpp"
#include "tskit/checkpoint.hpp"
#include "tskit/error.hpp"

using namespace tskit;

namespace {

SageModel sample_model() {
  Rng rng(21);
  auto m = SageModel::initialize(5, std::vector<std::size_t>{4, 3}, 0xabcdef, rng);
  m.threshold = 0.1235;
  m.scaler.mean = Eigen::RowVectorXd::LinSpaced(5, -1, 1);
  m.scaler.inv_std = Eigen::RowVectorXd::Constant(5, 2.0);
  round_to_float(m);
  return m;
}

}  // namespace

TEST(Checkpoint, RoundTripIsExact) {
  const auto m = sample_model();
  CheckpointMeta meta;
  meta.seed = 42;
  meta.sampler.num_roots = 7;
  meta.sampler.walk_length = 3;
  meta.config = "{\"epochs\":3}";
  const auto bytes = encode_checkpoint(m, meta);
  const auto back = decode_checkpoint(bytes);
  EXPECT_EQ(back.meta.seed, 42u);
  EXPECT_EQ(back.meta.sampler.num_roots, 7u);
  EXPECT_EQ(back.meta.sampler.walk_length, 3u);
  EXPECT_EQ(back.meta.config, meta.config);
  EXPECT_EQ(back.model.schema_fingerprint, m.schema_fingerprint);
  EXPECT_EQ(back.model.threshold, m.threshold);
  EXPECT_EQ(back.model.layer_widths(), m.layer_widths());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    EXPECT_EQ(back.model.layers[l].W, m.layers[l].W);
    EXPECT_EQ(back.model.layers[l].B, m.layers[l].B);
  }
  EXPECT_EQ(back.model.head.W, m.head.W);
  EXPECT_EQ(back.model.head.bias, m.head.bias);
  EXPECT_EQ(back.model.scaler.mean, m.scaler.mean);
  EXPECT_EQ(encode_checkpoint(back.model, back.meta), bytes);
}

TEST(Checkpoint, ReloadedModelPredictsIdentically) {
  const auto m = sample_model();
  auto g = toy::graph_from_edges(4, {{0, 1}, {1, 2}}, 5);
  g.features.setRandom();
  const auto path = std::filesystem::temp_directory_path() / "tskit_ckpt_test.ckpt";
  save_checkpoint(path, m, {});
  const auto back = load_checkpoint(path);
  std::filesystem::remove(path);
  const GraphView view{&g.adjacency};
  EXPECT_EQ(forward(m, view, g.features), forward(back.model, view, g.features));
}

TEST(Checkpoint, RejectsDamagedFiles) {
  const auto bytes = encode_checkpoint(sample_model(), {});
  auto expect_malformed = [](const std::string& b) {
    try {
      decode_checkpoint(b);
      ADD_FAILURE() << "accepted damaged checkpoint";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedCheckpoint);
    }
  };
  expect_malformed("");
  expect_malformed("not json\n");
  expect_malformed(bytes.substr(0, bytes.size() - 4));
  expect_malformed(bytes + "xxxx");
  std::string header_only = bytes.substr(0, bytes.find('\n') + 1);
  expect_malformed(header_only);
  EXPECT_THROW(load_checkpoint("/nonexistent/dir/model.ckpt"), Error);
}
