#include <gtest/gtest.h>

#include "tskit/config.hpp"
#include "tskit/error.hpp"

using namespace tskit;

namespace {

void expect_invalid(std::string_view toml) {
  try {
    parse_run_config(toml);
    ADD_FAILURE() << "accepted:\n" << toml;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << toml;
  }
}

}  // namespace

TEST(RunConfig, EmptyDocumentGivesDefaults) {
  const auto c = parse_run_config("");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(c.train.epochs, 100u);
  EXPECT_EQ(c.train.minibatches_per_epoch, 20u);
  EXPECT_EQ(c.train.threshold.steps, 1000u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5}));
}

TEST(RunConfig, ReadsEveryField) {
  const auto c = parse_run_config(R"(
# training
epochs = 7
minibatches_per_epoch = 3   # per epoch
learning_rate = 2.5e-1
hidden = [
  16,
  8,
]
seed = 4
patience = 2
standardize = true

[sampler]
num_roots = 12
walk_length = 3
presample_rounds = 9

[threshold]
lower = 0.0
upper = 0.5
steps = 500

[experiment]
seeds = [3, 1]
split_seed = 77
jobs = 4
)");
  EXPECT_EQ(c.train.epochs, 7u);
  EXPECT_EQ(c.train.minibatches_per_epoch, 3u);
  EXPECT_EQ(c.train.learning_rate, 0.25);
  EXPECT_EQ(c.train.hidden, (std::vector<std::size_t>{16, 8}));
  EXPECT_EQ(c.train.seed, 4u);
  EXPECT_EQ(c.train.patience, 2u);
  EXPECT_TRUE(c.train.standardize);
  EXPECT_EQ(c.train.sampler.num_roots, 12u);
  EXPECT_EQ(c.train.sampler.walk_length, 3u);
  EXPECT_EQ(c.train.sampler.presample_rounds, 9u);
  EXPECT_EQ(c.train.threshold.steps, 500u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 1}));
  EXPECT_EQ(c.split_seed, 77u);
  EXPECT_EQ(c.jobs, 4u);
}

TEST(RunConfig, DottedKeysEqualTables) {
  EXPECT_EQ(parse_run_config("sampler.walk_length = 4\nexperiment.seeds = [9]\n"),
            parse_run_config("[sampler]\nwalk_length = 4\n[experiment]\nseeds = [9]\n"));
}

TEST(RunConfig, TomlRoundTrip) {
  RunConfig c;
  c.train.epochs = 3;
  c.train.learning_rate = 0.1 + 0.2;
  c.train.hidden = {5};
  c.train.sampler.num_roots = 2;
  c.train.threshold.upper = 0.4;
  c.seeds = {8};
  c.split_seed = 6;
  c.jobs = 2;
  EXPECT_EQ(parse_run_config(to_toml(c)), c);
  EXPECT_EQ(parse_run_config(to_toml(RunConfig{})), RunConfig{});
}

TEST(RunConfig, JsonEchoOmitsJobCount) {
  RunConfig a, b;
  b.jobs = 8;
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(to_json(a).find('\n'), std::string::npos);
  b.train.epochs = 1;
  EXPECT_NE(to_json(a), to_json(b));
}

TEST(RunConfig, Rejections) {
  expect_invalid("epoch = 3\n");
  expect_invalid("[sampler]\nroots = 3\n");
  expect_invalid("[unknown]\n");
  expect_invalid("epochs = \"ten\"\n");
  expect_invalid("epochs = -1\n");
  expect_invalid("learning_rate = 0\n");
  expect_invalid("hidden = []\n");
  expect_invalid("hidden = [4, 0]\n");
  expect_invalid("epochs = 1\nepochs = 2\n");
  expect_invalid("[sampler]\n[sampler]\n");
  expect_invalid("[threshold]\nlower = 0.6\n");
  expect_invalid("[experiment]\nseeds = []\n");
  expect_invalid("[experiment]\njobs = 0\n");
  expect_invalid("epochs = \n");
  expect_invalid("epochs 3\n");
  expect_invalid("hidden = [1, 2\n");
  expect_invalid("standardize = yes\n");
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
  try {
    parse_run_config("epochs = 1\n\nfoo = = 2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(RunConfig, LoadReportsMissingFile) { EXPECT_THROW(load_run_config("/nonexistent/run.toml"), Error); }
