#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "tdsnn/network.hpp"

namespace tdsnn::detail {

// Shared by simulate() and the reservoir loop: decimated analog samples
// before each step, spike times after it, all relative to `start`.
class TraceRecorder {
public:
  TraceRecorder(const Network& network, double duration, const TraceOptions& options)
      : options_(options),
        start_(network.time()),
        decimation_(std::max<std::int64_t>(
            1, std::llround(network.config().trace_interval / network.dt()))) {
    const std::size_t n = network.size();
    traces_.duration = duration;
    traces_.dt = network.dt();
    traces_.spike_times.resize(n);
    if (options.membrane) traces_.v_mem.channels = n;
    if (options.synapse) {
      traces_.v_syn.channels = n;
      traces_.freq.channels = n;
    }
  }

  double start() const { return start_; }

  void before_step(const Network& network, std::int64_t k) {
    if (!(options_.membrane || options_.synapse) || k % decimation_ != 0) return;
    traces_.sample_times.push_back(network.time() - start_);
    const SynapseParams& syn = network.config().synapse;
    for (const NeuronState& s : network.neurons()) {
      if (options_.membrane) traces_.v_mem.values.push_back(s.v_mem);
    }
    if (options_.synapse) {
      for (const SynapseState& s : network.synapses()) {
        traces_.v_syn.values.push_back(s.v_syn);
        traces_.freq.values.push_back(osc_frequency(s.v_syn, syn));
      }
    }
  }

  void after_step(const Network& network) {
    if (!options_.spikes) return;
    const auto fired = network.fired();
    for (std::size_t i = 0; i < fired.size(); ++i) {
      if (fired[i]) traces_.spike_times[i].push_back(network.time() - start_);
    }
  }

  TraceSet take() { return std::move(traces_); }

private:
  TraceOptions options_;
  double start_;
  std::int64_t decimation_;
  TraceSet traces_;
};

}  // namespace tdsnn::detail
