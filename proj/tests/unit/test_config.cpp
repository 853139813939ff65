#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tdsnn/config.hpp"
#include "tdsnn/errors.hpp"

using namespace tdsnn;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(parse_config(""), RunConfig{});
  EXPECT_EQ(parse_config("# only a comment\n\n"), RunConfig{});
}

TEST(Config, ParsesSections) {
  const RunConfig c = parse_config(R"(
[network]
n_neurons = 12
seed = 99
dt = 5e-6

[topology]
mode = "random"
p = 0.25

[neuron]
r_inh = 700

[synapse]
sub_onset = "reset"

[train]
readout_source = "vsyn"
teacher_forcing = false

[feedback]
gain = 150   # trailing comment
)");
  EXPECT_EQ(c.network.n_neurons, 12u);
  EXPECT_EQ(c.network.rng_seed, 99u);
  EXPECT_DOUBLE_EQ(c.network.dt, 5e-6);
  ASSERT_TRUE(std::holds_alternative<RandomTopology>(c.network.connections));
  EXPECT_DOUBLE_EQ(std::get<RandomTopology>(c.network.connections).p, 0.25);
  EXPECT_DOUBLE_EQ(c.network.neuron.r_inh, 700.0);
  EXPECT_EQ(c.network.synapse.sub_onset, SubOnsetPhase::reset);
  EXPECT_EQ(c.train.readout_source, ReadoutSource::vsyn);
  EXPECT_FALSE(c.train.teacher_forcing);
  EXPECT_DOUBLE_EQ(c.feedback.gain, 150.0);
}

TEST(Config, ExplicitConnections) {
  const RunConfig c = parse_config(R"(
[network]
n_neurons = 3
[topology]
mode = "explicit"
connections = [
  "0>1:exc:15",
  "1>2:inh:0",
]
)");
  const auto& list = std::get<std::vector<Connection>>(c.network.connections);
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0], (Connection{0, 1, Polarity::excitatory, WeightCode(15)}));
  EXPECT_EQ(list[1], (Connection{1, 2, Polarity::inhibitory, WeightCode(0)}));
}

TEST(Config, Errors) {
  EXPECT_NE(error_of("[network]\nn_neurons = 0\n").find("n_neurons"), std::string::npos);
  EXPECT_NE(error_of("[network]\nbogus = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(error_of("[nope]\n").find("nope"), std::string::npos);
  EXPECT_NE(error_of("[network]\nseed = 1\nseed = 2\n").find("line 3"), std::string::npos);
  EXPECT_FALSE(error_of("[neuron]\nv_th = \"high\"\n").empty());
  EXPECT_FALSE(error_of("[network]\nn_neurons 4\n").empty());
  EXPECT_FALSE(error_of("[train]\nreadout_source = \"spikes\"\n").empty());
  EXPECT_FALSE(error_of("[network]\nn_neurons = 2\n[topology]\nmode = \"explicit\"\nconnections = [\"0>5:exc:1\"]\n").empty());
  EXPECT_FALSE(error_of("[topology]\nconnections = [\"0>0:exc:1\"]\np = 0.2\n").empty());
  EXPECT_FALSE(error_of("[weight]\ntau_unit = -1\n").empty());
}

TEST(Config, RoundTrip) {
  RunConfig c = reservoir_preset();
  c.network.neuron.r_base = 1.0 / 3.0;
  c.train.target.amplitude = 0.123456789012345;
  EXPECT_EQ(parse_config(serialize_config(c)), c);

  RunConfig e;
  e.network.n_neurons = 4;
  e.network.connections = std::vector<Connection>{{0, 3, Polarity::inhibitory, WeightCode(7)},
                                                  {2, 1, Polarity::excitatory, WeightCode(15)}};
  e.train.readout_source = ReadoutSource::edge_rate;
  e.network.synapse.sub_onset = SubOnsetPhase::reset;
  EXPECT_EQ(parse_config(serialize_config(e)), e);
  EXPECT_EQ(parse_config(serialize_config(RunConfig{})), RunConfig{});
}

TEST(Config, DefaultsLayerUnderneath) {
  const RunConfig c = parse_config("[feedback]\ngain = 10\n", reservoir_preset());
  EXPECT_EQ(c.network.n_neurons, 100u);
  EXPECT_DOUBLE_EQ(c.feedback.gain, 10.0);
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "tdsnn_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "run.toml";
  {
    std::ofstream f(path);
    f << "[network]\nn_neurons = 7\n";
  }
  EXPECT_EQ(load_config(path).network.n_neurons, 7u);
  EXPECT_THROW(load_config(dir / "missing.toml"), IoError);
  std::filesystem::remove_all(dir);
}
