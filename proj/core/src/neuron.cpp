#include "tdsnn/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdsnn/errors.hpp"

namespace tdsnn {

void NeuronParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("neuron: ") + what);
  };
  require(std::isfinite(v_th) && v_th > 0.0, "v_th must be > 0");
  require(std::isfinite(r_base) && r_base > 0.0, "r_base must be > 0");
  require(std::isfinite(r_exc) && r_exc >= 0.0, "r_exc must be >= 0");
  require(std::isfinite(r_inh) && r_inh >= 0.0, "r_inh must be >= 0");
  require(std::isfinite(spike_width) && spike_width > 0.0, "spike_width must be > 0");
}

NeuronStepResult neuron_step(const NeuronState& state, const NeuronParams& params,
                             bool exc_high, bool inh_high, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("neuron_step: dt must be > 0");
  if (dt > params.spike_width) {
    throw InvalidArgument("neuron_step: dt must not exceed spike_width");
  }

  double rate = params.r_base;
  if (exc_high) rate += params.r_exc;
  if (inh_high) rate -= params.r_inh;

  NeuronStepResult out{state, false};
  out.state.time = state.time + dt;
  out.state.v_mem = std::max(0.0, state.v_mem + rate * dt);
  if (out.state.v_mem >= params.v_th) {
    out.fired = true;
    out.state.v_mem = 0.0;
    out.state.last_spike_time = out.state.time;
  }
  return out;
}

double free_run_period(const NeuronParams& params) {
  if (!(params.r_base > 0.0)) throw InvalidArgument("free_run_period: r_base must be > 0");
  return params.v_th / params.r_base;
}

}  // namespace tdsnn
