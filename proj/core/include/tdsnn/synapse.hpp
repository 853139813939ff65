#pragma once

#include <optional>

namespace tdsnn {

// What the ring oscillator does with its phase while V_SYN sits below onset.
enum class SubOnsetPhase { freeze, reset };

// Ring-oscillator synapse. Input spikes inject a fraction of the remaining
// headroom into V_SYN, V_SYN leaks exponentially to 0, and the oscillator
// frequency is linear in V_SYN between onset and saturation.
//
// Defaults are the fit `calibrate` produces for its default anchor set
// (41/90/98 Hz under the default neuron drive).
struct SynapseParams {
  double delta_up = 0.3487;   // per-spike fraction of (v_max - v_syn)
  double tau_leak = 0.01819;  // s
  double v_osc = 0.3332;      // oscillation onset
  double v_max = 1.0;
  double f_min = 15.0;   // Hz at onset
  double f_max = 200.0;  // Hz at saturation
  SubOnsetPhase sub_onset = SubOnsetPhase::freeze;

  void validate() const;

  friend bool operator==(const SynapseParams&, const SynapseParams&) = default;
};

struct SynapseState {
  double v_syn = 0.0;
  double phase = 0.0;  // [0, 1)

  friend bool operator==(const SynapseState&, const SynapseState&) = default;
};

struct SynapseStepResult {
  SynapseState state;
  // Offset of the rising edge from the start of the step, if one occurred.
  // dt * f_max < 0.5 guarantees at most one per step.
  std::optional<double> rising_edge;
};

// Throws ConfigError when dt * f_max >= 0.5 and InvalidArgument for dt <= 0.
void check_synapse_dt(const SynapseParams& params, double dt);

/// One fixed step. The spike charge is applied at the start of the step, the
/// phase advances at the charged level, and the leak is applied at the end.
SynapseStepResult synapse_step(const SynapseState& state, const SynapseParams& params,
                               bool spike_in, double dt);

// Zero below onset, linear from f_min to f_max above it.
double osc_frequency(double v_syn, const SynapseParams& params);

/// Long-run mean oscillator frequency under a periodic input spike train.
///
/// Uses the fixed point of the charge/leak map at the pre-spike instant and
/// integrates the frequency law exactly over one inter-spike interval.
double steady_state_frequency(double spike_rate, const SynapseParams& params);

// Pre-spike fixed point of v -> exp(-T/tau) * (v + delta_up * (v_max - v)).
double steady_state_vsyn(double spike_rate, const SynapseParams& params);

}  // namespace tdsnn
