#include "tdsnn/synapse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdsnn/errors.hpp"

namespace tdsnn {

void SynapseParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("synapse: ") + what);
  };
  require(delta_up > 0.0 && delta_up <= 1.0, "delta_up must be in (0, 1]");
  require(std::isfinite(tau_leak) && tau_leak > 0.0, "tau_leak must be > 0");
  require(v_osc >= 0.0 && v_osc < v_max, "v_osc must be in [0, v_max)");
  require(std::isfinite(v_max), "v_max must be finite");
  require(f_min > 0.0 && f_min <= f_max && std::isfinite(f_max), "need 0 < f_min <= f_max");
}

void check_synapse_dt(const SynapseParams& params, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("synapse_step: dt must be > 0");
  if (dt * params.f_max >= 0.5) {
    throw ConfigError("synapse: dt=" + std::to_string(dt) +
                      " undersamples the oscillator (dt * f_max must be < 0.5)");
  }
}

double osc_frequency(double v_syn, const SynapseParams& params) {
  if (v_syn < params.v_osc) return 0.0;
  const double x = (v_syn - params.v_osc) / (params.v_max - params.v_osc);
  const double f = params.f_min + (params.f_max - params.f_min) * x;
  return std::clamp(f, params.f_min, params.f_max);
}

SynapseStepResult synapse_step(const SynapseState& state, const SynapseParams& params,
                               bool spike_in, double dt) {
  check_synapse_dt(params, dt);

  SynapseStepResult out{state, std::nullopt};
  double v = state.v_syn;
  if (spike_in) v += params.delta_up * (params.v_max - v);

  const double f = osc_frequency(v, params);
  if (f > 0.0) {
    const double advanced = state.phase + f * dt;
    if (advanced >= 1.0) {
      out.rising_edge = (1.0 - state.phase) / f;
      out.state.phase = advanced - 1.0;
    } else {
      out.state.phase = advanced;
    }
  } else if (params.sub_onset == SubOnsetPhase::reset) {
    out.state.phase = 0.0;
  }

  out.state.v_syn = v * std::exp(-dt / params.tau_leak);
  return out;
}

double steady_state_vsyn(double spike_rate, const SynapseParams& params) {
  if (!(spike_rate >= 0.0)) throw InvalidArgument("steady_state: spike_rate must be >= 0");
  if (spike_rate == 0.0) return 0.0;
  const double decay = std::exp(-1.0 / (spike_rate * params.tau_leak));
  return decay * params.delta_up * params.v_max / (1.0 - decay * (1.0 - params.delta_up));
}

double steady_state_frequency(double spike_rate, const SynapseParams& params) {
  if (!(spike_rate >= 0.0)) throw InvalidArgument("steady_state: spike_rate must be >= 0");
  if (spike_rate == 0.0) return 0.0;

  const double period = 1.0 / spike_rate;
  const double pre = steady_state_vsyn(spike_rate, params);
  const double peak = pre + params.delta_up * (params.v_max - pre);
  if (peak < params.v_osc) return 0.0;

  // Time spent above onset while decaying from the post-spike peak.
  double above = period;
  if (params.v_osc > 0.0) above = std::min(period, params.tau_leak * std::log(peak / params.v_osc));

  // Exact integral of f(v(t)) for v(t) = peak * exp(-t / tau) over [0, above].
  // peak <= v_max, so the upper clamp of the frequency law never binds.
  const double slope = (params.f_max - params.f_min) / (params.v_max - params.v_osc);
  const double cycles = (params.f_min - slope * params.v_osc) * above +
                        slope * peak * params.tau_leak * (1.0 - std::exp(-above / params.tau_leak));
  return cycles / period;
}

}  // namespace tdsnn
