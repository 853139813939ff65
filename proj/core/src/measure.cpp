#include "tdsnn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "tdsnn/errors.hpp"
#include "tdsnn/network.hpp"

namespace tdsnn {

double firing_rate(std::span<const double> spike_times, double window, int n_windows,
                   double recording_length) {
  if (!(window > 0.0)) throw InvalidArgument("firing_rate: window must be > 0");
  if (n_windows < 1) throw InvalidArgument("firing_rate: n_windows must be >= 1");
  const double span = window * n_windows;
  // Relative slack so that e.g. 1024 x 0.1 s fits a 102.4 s recording.
  if (recording_length < span * (1.0 - 1e-12)) {
    throw InvalidArgument("firing_rate: recording of " + std::to_string(recording_length) +
                          " s is shorter than " + std::to_string(n_windows) + " windows of " +
                          std::to_string(window) + " s");
  }
  double total = 0.0;
  for (int k = 0; k < n_windows; ++k) {
    // Both edges from k so neighbouring windows share a boundary exactly.
    const double lo = k * window;
    const double hi = (k + 1) * window;
    const auto first = std::lower_bound(spike_times.begin(), spike_times.end(), lo);
    const auto last = std::lower_bound(first, spike_times.end(), hi);
    total += static_cast<double>(last - first) / window;
  }
  return total / n_windows;
}

std::vector<double> regular_edges(double rate, double duration, double first_edge) {
  if (!(rate > 0.0)) throw InvalidArgument("regular_edges: rate must be > 0");
  std::vector<double> edges;
  const double period = 1.0 / rate;
  for (std::int64_t k = 0;; ++k) {
    const double t = first_edge + static_cast<double>(k) * period;
    if (t >= duration) break;
    edges.push_back(t);
  }
  return edges;
}

DriveResult measure_drive(const NeuronParams& neuron, const SynapseParams& synapse,
                          const WeightParams& weight, const DriveCase& drive, double duration,
                          double settle, double dt) {
  if (!(duration > settle) || !(settle >= 0.0)) {
    throw InvalidArgument("measure_drive: need 0 <= settle < duration");
  }
  NetworkConfig config;
  config.n_neurons = 1;
  config.neuron = neuron;
  config.synapse = synapse;
  config.weight = weight;
  config.dt = dt;
  Network net(config);

  const PulseTrain source =
      drive.kind == DriveKind::none
          ? PulseTrain{}
          : shape_pulses(regular_edges(drive.input_rate, duration), drive.code, weight);
  PulseCursor cursor(source);

  DriveResult result;
  std::uint8_t exc = 0, inh = 0;
  std::int64_t edges = 0;
  const auto steps = static_cast<std::int64_t>(std::llround(duration / dt));
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = net.time();
    const std::uint8_t level = cursor.is_high(t + 0.5 * dt) ? 1 : 0;
    exc = drive.kind == DriveKind::excitatory ? level : 0;
    inh = drive.kind == DriveKind::inhibitory ? level : 0;
    net.step({&exc, 1}, {&inh, 1});
    if (net.fired()[0]) result.spike_times.push_back(net.time());
    if (net.edged()[0] && net.last_edge_times()[0] >= settle) ++edges;
  }
  result.neuron_rate = static_cast<double>(result.spike_times.size()) / duration;
  result.synapse_frequency = static_cast<double>(edges) / (duration - settle);
  return result;
}

}  // namespace tdsnn
