#pragma once

#include <string>
#include <vector>

#include "tdsnn/measure.hpp"
#include "tdsnn/neuron.hpp"
#include "tdsnn/synapse.hpp"
#include "tdsnn/weight.hpp"

namespace tdsnn {

// Target mean synapse frequency under one neuron drive condition.
struct SynapseAnchor {
  std::string name;
  DriveCase drive;
  double target_hz = 0.0;
  double tolerance = 0.05;  // relative
};

struct CalibrationTargets {
  double free_run_hz = 200.0;
  double free_run_tolerance = 0.02;
  std::vector<SynapseAnchor> synapse;  // empty: fit r_base only

  // 200 Hz free run; 41 / 90 / 98 Hz synapse output with the neuron receiving
  // a 100 Hz code-12 source on its inhibitory input / nothing / its
  // excitatory input.
  static CalibrationTargets measured();
};

struct CalibrationSettings {
  double dt = 10e-6;
  double duration = 5.0;  // s per verification run
  double settle = 1.0;    // s discarded before counting synapse edges
  int refinements = 8;
};

struct AnchorResidual {
  std::string name;
  double target_hz = 0.0;
  double achieved_hz = 0.0;
  double tolerance = 0.0;

  double relative_error() const { return (achieved_hz - target_hz) / target_hz; }
  bool within_tolerance() const;
};

struct Calibration {
  NeuronParams neuron;
  SynapseParams synapse;
  std::vector<AnchorResidual> residuals;  // free run first, then synapse anchors
};

/// Fits r_base in closed form to the free-run anchor, then delta_up,
/// tau_leak and v_osc to the synapse anchors. The synapse fit runs a
/// multistart pattern search on the analytic steady-state model and then
/// corrects its goals against full simulations until the simulated
/// frequencies land inside tolerance.
///
/// Every other field of `neuron` and `synapse` is kept as given.
/// Throws CalibrationError carrying the best residuals when an anchor stays
/// out of tolerance, InvalidArgument for non-positive targets.
Calibration calibrate(const CalibrationTargets& targets, const NeuronParams& neuron,
                      const SynapseParams& synapse, const WeightParams& weight,
                      const CalibrationSettings& settings = {});

// One line per anchor: name, target, achieved, relative error, tolerance.
std::string format_residuals(const std::vector<AnchorResidual>& residuals);

}  // namespace tdsnn
