#include "tdsnn/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tdsnn/errors.hpp"

namespace tdsnn {
namespace {

void append(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  out += buf;
}

void append(std::string& out, std::size_t x) { out += std::to_string(x); }

template <class T, class... Rest>
void row(std::string& out, T first, Rest... rest) {
  append(out, first);
  ((out += ',', append(out, rest)), ...);
  out += '\n';
}

}  // namespace

std::string spikes_csv(const TraceSet& traces) {
  std::string out = "neuron_id,time_s\n";
  for (std::size_t i = 0; i < traces.spike_times.size(); ++i) {
    for (double t : traces.spike_times[i]) row(out, i, t);
  }
  return out;
}

std::string membrane_csv(const TraceSet& traces) {
  std::string out = "time_s,neuron_id,v_mem\n";
  const auto& v = traces.v_mem;
  for (std::size_t s = 0; s < v.samples(); ++s) {
    for (std::size_t i = 0; i < v.channels; ++i) row(out, traces.sample_times[s], i, v(s, i));
  }
  return out;
}

std::string synapse_csv(const TraceSet& traces) {
  std::string out = "time_s,synapse_id,v_syn,freq_hz\n";
  const auto& v = traces.v_syn;
  for (std::size_t s = 0; s < v.samples(); ++s) {
    for (std::size_t i = 0; i < v.channels; ++i) {
      row(out, traces.sample_times[s], i, v(s, i), traces.freq(s, i));
    }
  }
  return out;
}

std::string output_csv(const OutputTrace& output) {
  std::string out = "time_s,z,target\n";
  for (std::size_t s = 0; s < output.time.size(); ++s) {
    row(out, output.time[s], output.z[s], output.target[s]);
  }
  return out;
}

std::string summary_json(const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["command"] = summary.command;
  j["seed"] = summary.seed;
  j["wall_seconds"] = summary.wall_seconds;
  auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : summary.metrics) {
    if (!std::isfinite(value)) {
      throw NumericalError("summary: metric '" + name + "' is not finite");
    }
    metrics[name] = value;
  }
  j["config"] = summary.config;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("error while writing " + path.string());
}

void write_traces(const std::filesystem::path& dir, const TraceSet& traces,
                  const RunSummary& summary, const OutputTrace* output) {
  // Render everything first so a bad metric leaves no partial output behind.
  const std::string json = summary_json(summary);
  write_text_file(dir / "spikes.csv", spikes_csv(traces));
  write_text_file(dir / "membrane.csv", membrane_csv(traces));
  write_text_file(dir / "synapse.csv", synapse_csv(traces));
  if (output != nullptr) write_text_file(dir / "output.csv", output_csv(*output));
  write_text_file(dir / "summary.json", json);
}

std::vector<OutputRow> read_output_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "time_s,z,target") {
    throw IoError(path.string() + ": missing 'time_s,z,target' header");
  }
  std::vector<OutputRow> rows;
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    double v[3];
    const char* p = line.c_str();
    for (int k = 0; k < 3; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      const char expected = k < 2 ? ',' : '\0';
      if (end == p || *end != expected) {
        throw IoError(path.string() + " line " + std::to_string(number) + ": malformed row");
      }
      p = end + 1;
    }
    rows.push_back({v[0], v[1], v[2]});
  }
  return rows;
}

}  // namespace tdsnn
