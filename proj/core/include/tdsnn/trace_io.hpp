#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tdsnn/network.hpp"
#include "tdsnn/reservoir.hpp"

namespace tdsnn {

// Run metadata written next to the traces as summary.json.
struct RunSummary {
  std::string command;
  std::string config;                     // serialized config echo
  std::map<std::string, double> metrics;  // must all be finite
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

// Column schemas, one row per event or sample, floats at 9 significant
// digits. Every writer emits at least the header line.
//   spikes.csv    neuron_id,time_s
//   membrane.csv  time_s,neuron_id,v_mem
//   synapse.csv   time_s,synapse_id,v_syn,freq_hz
//   output.csv    time_s,z,target
std::string spikes_csv(const TraceSet& traces);
std::string membrane_csv(const TraceSet& traces);
std::string synapse_csv(const TraceSet& traces);
std::string output_csv(const OutputTrace& output);

// Throws NumericalError if a metric is not finite.
std::string summary_json(const RunSummary& summary);

// Writes text to `path`, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Writes spikes/membrane/synapse CSVs (plus output.csv when `output` is
/// given) and summary.json into `dir`.
void write_traces(const std::filesystem::path& dir, const TraceSet& traces,
                  const RunSummary& summary, const OutputTrace* output = nullptr);

struct OutputRow {
  double time = 0.0;
  double z = 0.0;
  double target = 0.0;
};

// Parses an output.csv; IoError naming the path and line on bad input.
std::vector<OutputRow> read_output_csv(const std::filesystem::path& path);

}  // namespace tdsnn
