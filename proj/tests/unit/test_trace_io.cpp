#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tdsnn/errors.hpp"
#include "tdsnn/trace_io.hpp"

using namespace tdsnn;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(TraceIo, EmptyTracesGiveHeadersOnly) {
  const TraceSet empty;
  EXPECT_EQ(spikes_csv(empty), "neuron_id,time_s\n");
  EXPECT_EQ(membrane_csv(empty), "time_s,neuron_id,v_mem\n");
  EXPECT_EQ(synapse_csv(empty), "time_s,synapse_id,v_syn,freq_hz\n");
  EXPECT_EQ(output_csv(OutputTrace{}), "time_s,z,target\n");
}

TEST(TraceIo, FreeRunSpikesFile) {
  Network net(NetworkConfig{});
  const TraceSet tr = simulate(net, {}, 0.1);
  const auto rows = lines(spikes_csv(tr));
  EXPECT_NEAR(static_cast<double>(rows.size() - 1), 20.0, 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].rfind("0,", 0), 0u);
  const auto mem = lines(membrane_csv(tr));
  EXPECT_EQ(mem.size(), tr.sample_times.size() + 1);
  const auto syn = lines(synapse_csv(tr));
  EXPECT_EQ(syn.size(), tr.sample_times.size() + 1);
}

TEST(TraceIo, OutputRoundTrip) {
  OutputTrace out;
  for (int k = 0; k < 50; ++k) {
    out.time.push_back(k * 1e-3);
    out.z.push_back(std::sin(k * 0.1) / 3.0);
    out.target.push_back(0.8 * std::sin(k * 0.1));
  }
  const auto dir = std::filesystem::temp_directory_path() / "tdsnn_trace_io_test";
  std::filesystem::remove_all(dir);
  write_text_file(dir / "nested" / "output.csv", output_csv(out));
  const auto rows = read_output_csv(dir / "nested" / "output.csv");
  ASSERT_EQ(rows.size(), out.time.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].time, out.time[i], 1e-9 * std::max(1.0, out.time[i]));
    EXPECT_NEAR(rows[i].z, out.z[i], 1e-8);
    EXPECT_NEAR(rows[i].target, out.target[i], 1e-8);
  }
  write_text_file(dir / "bad.csv", "time_s,z,target\n0.1,abc,0\n");
  EXPECT_THROW(read_output_csv(dir / "bad.csv"), IoError);
  EXPECT_THROW(read_output_csv(dir / "absent.csv"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(TraceIo, SummaryJson) {
  RunSummary s;
  s.command = "network run";
  s.config = "[network]\nn_neurons = 1\n";
  s.metrics = {{"spikes", 20.0}};
  s.seed = 42;
  const auto j = nlohmann::json::parse(summary_json(s));
  EXPECT_EQ(j["command"], "network run");
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["metrics"]["spikes"], 20.0);
  s.metrics["bad"] = std::nan("");
  EXPECT_THROW(summary_json(s), NumericalError);
}

TEST(TraceIo, WriteTracesIsByteStable) {
  NetworkConfig c;
  c.n_neurons = 5;
  c.connections = RandomTopology{};
  c.rng_seed = 3;
  const auto dir = std::filesystem::temp_directory_path() / "tdsnn_write_traces_test";
  std::filesystem::remove_all(dir);
  for (const char* sub : {"a", "b"}) {
    Network net(c);
    const TraceSet tr = simulate(net, {}, 0.05);
    RunSummary s;
    s.command = "test";
    write_traces(dir / sub, tr, s);
  }
  for (const char* f : {"spikes.csv", "membrane.csv", "synapse.csv"}) {
    const auto a = slurp(dir / "a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "summary.json"));
  std::filesystem::remove_all(dir);
}
