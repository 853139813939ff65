#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "tdsnn/neuron.hpp"
#include "tdsnn/pulse_train.hpp"
#include "tdsnn/synapse.hpp"
#include "tdsnn/weight.hpp"

namespace tdsnn {

enum class Polarity : std::uint8_t { excitatory, inhibitory };

// Synapse `pre` (owned by neuron `pre`) drives neuron `post` through a weight
// module with the given code, into its excitatory or inhibitory input.
struct Connection {
  std::size_t pre = 0;
  std::size_t post = 0;
  Polarity polarity = Polarity::excitatory;
  WeightCode code;

  friend bool operator==(const Connection&, const Connection&) = default;
};

// Independent Bernoulli(p) per ordered pair, no self-connections.
struct RandomTopology {
  double p = 0.1;
  double exc_fraction = 0.5;
  int code_min = WeightCode::kMin;
  int code_max = WeightCode::kMax;

  friend bool operator==(const RandomTopology&, const RandomTopology&) = default;
};

using ConnectionSpec = std::variant<std::vector<Connection>, RandomTopology>;

struct NetworkConfig {
  std::size_t n_neurons = 1;
  ConnectionSpec connections = std::vector<Connection>{};
  NeuronParams neuron;
  SynapseParams synapse;
  WeightParams weight;
  std::uint64_t rng_seed = 0;
  double dt = 10e-6;
  double trace_interval = 100e-6;

  // Throws InvalidArgument / ConfigError, including the dt preconditions of
  // every module.
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct TraceOptions {
  bool spikes = true;
  bool membrane = true;
  bool synapse = true;
};

// Sample-major analog series: value(s, i) is channel i at sample s.
struct AnalogSeries {
  std::size_t channels = 0;
  std::vector<double> values;

  std::size_t samples() const { return channels == 0 ? 0 : values.size() / channels; }
  double operator()(std::size_t sample, std::size_t channel) const {
    return values[sample * channels + channel];
  }
};

struct TraceSet {
  double duration = 0.0;
  double dt = 0.0;
  std::vector<std::vector<double>> spike_times;  // per neuron
  std::vector<double> sample_times;              // shared time base for analog series
  AnalogSeries v_mem;
  AnalogSeries v_syn;
  AnalogSeries freq;
};

struct ExternalInput {
  PulseTrain excitatory;
  PulseTrain inhibitory;
};

class Network {
public:
  // Validates the config and resolves the topology (random or explicit).
  explicit Network(const NetworkConfig& config);

  const NetworkConfig& config() const { return config_; }
  std::size_t size() const { return neurons_.size(); }
  const std::vector<Connection>& connections() const { return connections_; }
  double dt() const { return config_.dt; }
  std::int64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * config_.dt; }

  std::span<const NeuronState> neurons() const { return neurons_; }
  std::span<const SynapseState> synapses() const { return synapses_; }
  // Flags from the most recent step.
  std::span<const std::uint8_t> fired() const { return fired_; }
  // Oscillator rising edges: per-synapse flag for the most recent step and
  // the absolute time of each synapse's latest edge (-inf before the first).
  std::span<const std::uint8_t> edged() const { return edged_; }
  std::span<const double> last_edge_times() const { return last_edge_; }
  // Charge events delivered to each synapse since construction / reset().
  std::span<const std::uint64_t> charge_counts() const { return charges_; }

  /// Advances every module by one dt. External levels are per-neuron flags
  /// OR-ed with the recurrent weight-module outputs; an empty span means low
  /// everywhere.
  ///
  /// Recurrent pulses are sampled at the step midpoint from edges produced
  /// in earlier steps, so every connection carries a one-step transport delay
  /// and update order within a step does not matter.
  void step(std::span<const std::uint8_t> ext_exc = {},
            std::span<const std::uint8_t> ext_inh = {});

  void reset();

private:
  struct Fanin {
    std::vector<std::size_t> offsets;  // size()+1 entries
    std::vector<std::size_t> sources;
    std::vector<double> widths;  // widest code per (source, target, polarity)
  };

  bool any_high(const Fanin& fanin, std::size_t neuron, double t) const;

  NetworkConfig config_;
  std::vector<Connection> connections_;
  Fanin exc_fanin_;
  Fanin inh_fanin_;

  std::int64_t step_ = 0;
  std::vector<NeuronState> neurons_;
  std::vector<SynapseState> synapses_;
  std::vector<double> last_edge_;
  std::vector<std::uint8_t> fired_;
  std::vector<std::uint8_t> edged_;
  std::vector<std::uint64_t> charges_;
};

Network build_network(const NetworkConfig& config);

// Runs `network` from its current state for `duration` seconds. Inputs that
// extend past the horizon are accepted and the excess ignored.
TraceSet simulate(Network& network, const std::map<std::size_t, ExternalInput>& external_inputs,
                  double duration, const TraceOptions& options = {});

// Count of spikes per neuron in a trace.
std::vector<std::size_t> spike_counts(const TraceSet& traces);

}  // namespace tdsnn
