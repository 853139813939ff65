#pragma once

#include <span>
#include <vector>

#include "tdsnn/neuron.hpp"
#include "tdsnn/synapse.hpp"
#include "tdsnn/weight.hpp"

namespace tdsnn {

/// Mean over `n_windows` consecutive windows of (spikes in window) / window,
/// starting at t = 0. Windows are half-open, [k*window, (k+1)*window).
///
/// Throws InvalidArgument if window <= 0, n_windows < 1, or the recording is
/// shorter than window * n_windows.
double firing_rate(std::span<const double> spike_times, double window, int n_windows,
                   double recording_length);

// Rising edges of a regular source at `rate` Hz on [0, duration).
std::vector<double> regular_edges(double rate, double duration, double first_edge = 0.0);

enum class DriveKind { none, excitatory, inhibitory };

// One neuron driven by a regular source through a weight module, its own
// synapse observing the output spikes.
struct DriveCase {
  DriveKind kind = DriveKind::none;
  double input_rate = 100.0;  // Hz
  WeightCode code{12};
};

struct DriveResult {
  std::vector<double> spike_times;
  double neuron_rate = 0.0;        // Hz over the whole run
  double synapse_frequency = 0.0;  // Hz, oscillator edges after the settle time
};

/// Simulates the neuron -> synapse chain under `drive` for `duration` seconds.
/// Synapse edges before `settle` are discarded.
DriveResult measure_drive(const NeuronParams& neuron, const SynapseParams& synapse,
                          const WeightParams& weight, const DriveCase& drive, double duration,
                          double settle, double dt);

}  // namespace tdsnn
