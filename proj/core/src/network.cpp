#include "tdsnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tdsnn/errors.hpp"
#include "tdsnn/rng.hpp"
#include "trace_recorder.hpp"

namespace tdsnn {
namespace {

constexpr double kNever = -std::numeric_limits<double>::infinity();

std::vector<Connection> resolve_topology(const NetworkConfig& config) {
  if (const auto* explicit_list = std::get_if<std::vector<Connection>>(&config.connections)) {
    return *explicit_list;
  }
  const auto& random = std::get<RandomTopology>(config.connections);
  Rng rng(config.rng_seed);
  std::vector<Connection> out;
  const std::size_t n = config.n_neurons;
  for (std::size_t pre = 0; pre < n; ++pre) {
    for (std::size_t post = 0; post < n; ++post) {
      if (pre == post) continue;
      if (!(rng.uniform() < random.p)) continue;
      const Polarity polarity =
          rng.uniform() < random.exc_fraction ? Polarity::excitatory : Polarity::inhibitory;
      out.push_back({pre, post, polarity, WeightCode(rng.integer(random.code_min, random.code_max))});
    }
  }
  return out;
}

}  // namespace

void NetworkConfig::validate() const {
  if (n_neurons < 1) throw InvalidArgument("network: n_neurons must be >= 1");
  neuron.validate();
  synapse.validate();
  weight.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("network: dt must be > 0");
  if (dt > neuron.spike_width) {
    throw ConfigError("network: dt exceeds neuron spike_width; spikes could be skipped");
  }
  check_synapse_dt(synapse, dt);
  if (!(trace_interval >= dt)) throw InvalidArgument("network: trace_interval must be >= dt");

  if (const auto* list = std::get_if<std::vector<Connection>>(&connections)) {
    for (std::size_t k = 0; k < list->size(); ++k) {
      const Connection& c = (*list)[k];
      if (c.pre >= n_neurons || c.post >= n_neurons) {
        throw ConfigError("network: connection " + std::to_string(k) + " (" +
                          std::to_string(c.pre) + " -> " + std::to_string(c.post) +
                          ") references a neuron outside [0, " + std::to_string(n_neurons) + ")");
      }
    }
  } else {
    const auto& r = std::get<RandomTopology>(connections);
    if (!(r.p >= 0.0 && r.p <= 1.0)) throw InvalidArgument("network: p must be in [0, 1]");
    if (!(r.exc_fraction >= 0.0 && r.exc_fraction <= 1.0)) {
      throw InvalidArgument("network: exc_fraction must be in [0, 1]");
    }
    WeightCode lo(r.code_min);
    WeightCode hi(r.code_max);
    if (lo > hi) throw InvalidArgument("network: code_min must be <= code_max");
  }
}

Network::Network(const NetworkConfig& config) : config_(config) {
  config_.validate();
  connections_ = resolve_topology(config_);

  const std::size_t n = config_.n_neurons;
  auto build_fanin = [&](Polarity polarity) {
    // Several codes from one source into the same input collapse to the
    // widest one: the OR of nested pulses is the longest pulse.
    std::vector<std::map<std::size_t, double>> per_target(n);
    for (const Connection& c : connections_) {
      if (c.polarity != polarity) continue;
      double& w = per_target[c.post][c.pre];
      w = std::max(w, pulse_width(c.code, config_.weight));
    }
    Fanin f;
    f.offsets.push_back(0);
    for (const auto& sources : per_target) {
      for (const auto& [src, width] : sources) {
        f.sources.push_back(src);
        f.widths.push_back(width);
      }
      f.offsets.push_back(f.sources.size());
    }
    return f;
  };
  exc_fanin_ = build_fanin(Polarity::excitatory);
  inh_fanin_ = build_fanin(Polarity::inhibitory);
  reset();
}

void Network::reset() {
  const std::size_t n = config_.n_neurons;
  step_ = 0;
  neurons_.assign(n, NeuronState{});
  synapses_.assign(n, SynapseState{});
  last_edge_.assign(n, kNever);
  fired_.assign(n, 0);
  edged_.assign(n, 0);
  charges_.assign(n, 0);
}

bool Network::any_high(const Fanin& fanin, std::size_t neuron, double t) const {
  for (std::size_t k = fanin.offsets[neuron]; k < fanin.offsets[neuron + 1]; ++k) {
    const double age = t - last_edge_[fanin.sources[k]];
    if (age >= 0.0 && age < fanin.widths[k]) return true;
  }
  return false;
}

void Network::step(std::span<const std::uint8_t> ext_exc, std::span<const std::uint8_t> ext_inh) {
  const std::size_t n = size();
  if ((!ext_exc.empty() && ext_exc.size() != n) || (!ext_inh.empty() && ext_inh.size() != n)) {
    throw InvalidArgument("network step: external level spans must be empty or size n_neurons");
  }
  const double dt = config_.dt;
  const double t0 = time();
  const double midpoint = t0 + 0.5 * dt;

  // All recurrent levels come from last_edge_, which this step has not yet
  // touched, so neuron order is irrelevant.
  for (std::size_t i = 0; i < n; ++i) {
    const bool exc = (!ext_exc.empty() && ext_exc[i]) || any_high(exc_fanin_, i, midpoint);
    const bool inh = (!ext_inh.empty() && ext_inh[i]) || any_high(inh_fanin_, i, midpoint);
    NeuronStepResult r = neuron_step(neurons_[i], config_.neuron, exc, inh, dt);
    // Keep the neuron clock tied to the step index rather than a running sum.
    r.state.time = t0 + dt;
    if (r.fired) r.state.last_spike_time = r.state.time;
    neurons_[i] = r.state;
    fired_[i] = r.fired ? 1 : 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const bool spike = fired_[j] != 0;
    if (spike) ++charges_[j];
    const SynapseStepResult s = synapse_step(synapses_[j], config_.synapse, spike, dt);
    synapses_[j] = s.state;
    edged_[j] = s.rising_edge ? 1 : 0;
    if (s.rising_edge) last_edge_[j] = t0 + *s.rising_edge;
  }
  ++step_;
}

Network build_network(const NetworkConfig& config) { return Network(config); }

TraceSet simulate(Network& network, const std::map<std::size_t, ExternalInput>& external_inputs,
                  double duration, const TraceOptions& options) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("simulate: duration must be > 0");
  }
  const std::size_t n = network.size();
  for (const auto& [neuron, _] : external_inputs) {
    if (neuron >= n) {
      throw ConfigError("simulate: external input targets neuron " + std::to_string(neuron) +
                        " outside the network");
    }
  }

  const double dt = network.dt();
  const auto steps = static_cast<std::int64_t>(std::llround(duration / dt));
  detail::TraceRecorder recorder(network, duration, options);

  struct Cursors {
    std::size_t neuron;
    PulseCursor exc;
    PulseCursor inh;
  };
  std::vector<Cursors> cursors;
  for (const auto& [neuron, input] : external_inputs) {
    cursors.push_back({neuron, PulseCursor(input.excitatory), PulseCursor(input.inhibitory)});
  }
  std::vector<std::uint8_t> exc(cursors.empty() ? 0 : n, 0);
  std::vector<std::uint8_t> inh(cursors.empty() ? 0 : n, 0);

  for (std::int64_t k = 0; k < steps; ++k) {
    recorder.before_step(network, k);
    // External trains are expressed relative to the start of this run.
    const double midpoint = network.time() - recorder.start() + 0.5 * dt;
    for (Cursors& c : cursors) {
      exc[c.neuron] = c.exc.is_high(midpoint) ? 1 : 0;
      inh[c.neuron] = c.inh.is_high(midpoint) ? 1 : 0;
    }
    network.step(exc, inh);
    recorder.after_step(network);
  }
  return recorder.take();
}

std::vector<std::size_t> spike_counts(const TraceSet& traces) {
  std::vector<std::size_t> counts;
  counts.reserve(traces.spike_times.size());
  for (const auto& s : traces.spike_times) counts.push_back(s.size());
  return counts;
}

}  // namespace tdsnn
