#pragma once

#include <optional>

namespace tdsnn {

// Behavioural parameters of the time-domain LIF neuron. Voltages are
// normalised to a 1.0 supply; capacitances are folded into the rates.
struct NeuronParams {
  double v_th = 0.5;            // inverter trip point
  double r_base = 100.0;        // V/s, net leakage charging of C_mem
  double r_exc = 200.0;         // V/s, extra charging while an excitatory pulse is high
  double r_inh = 800.0;         // V/s, discharging while an inhibitory pulse is high
  double spike_width = 100e-6;  // s, width of V_Spike

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;

  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

struct NeuronState {
  double v_mem = 0.0;
  double time = 0.0;  // end of the last completed step
  std::optional<double> last_spike_time;

  friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

struct NeuronStepResult {
  NeuronState state;
  bool fired = false;
};

/// Advances one neuron by `dt` with constant input levels over the step.
///
/// The membrane integrates r_base + r_exc*[exc] - r_inh*[inh], is clamped
/// at zero from below, and on reaching v_th fires and resets to zero within
/// the same step.
///
/// Throws InvalidArgument for dt <= 0 or dt > spike_width.
NeuronStepResult neuron_step(const NeuronState& state, const NeuronParams& params,
                             bool exc_high, bool inh_high, double dt);

// Closed-form inter-spike interval with no input: v_th / r_base.
double free_run_period(const NeuronParams& params);

}  // namespace tdsnn
