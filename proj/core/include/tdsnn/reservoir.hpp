#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tdsnn/network.hpp"
#include "tdsnn/pulse_train.hpp"
#include "tdsnn/rls.hpp"

namespace tdsnn {

// Output-to-pulse feedback encoder settings.
struct FeedbackParams {
  double gain = 200.0;          // Hz per unit |z|
  double f_fb_max = 200.0;      // Hz cap
  double pulse_width = 200e-6;  // s

  void validate() const;

  friend bool operator==(const FeedbackParams&, const FeedbackParams&) = default;
};

struct FeedbackRates {
  double excitatory = 0.0;  // Hz
  double inhibitory = 0.0;  // Hz
};

// Positive output drives the excitatory train, negative the inhibitory one,
// each proportional to |z| and capped at f_fb_max.
FeedbackRates encode_feedback(double z, const FeedbackParams& params);

// Integrate-and-fire rate-to-pulse converter: a phase accumulator over the
// instantaneous rate emits one pulse of fixed width per unit of phase.
class RatePulseGenerator {
public:
  // The accumulator starts at `initial_phase` in [0, 1).
  explicit RatePulseGenerator(double width, double initial_phase = 0.5)
      : width_(width), phase_(initial_phase) {}

  // Integrates `rate` over [t, t + dt). Returns the emitted rise time, if any.
  std::optional<double> advance(double t, double rate, double dt);
  bool is_high(double t) const { return t >= last_rise_ && t - last_rise_ < width_; }

private:
  double width_;
  double phase_;
  double last_rise_ = -1.0e300;
};

/// Offline pulse train from a time-varying rate, integrated with step `step`.
/// Throws ConfigError if `width` is not shorter than 1 / rate_cap, and
/// InvalidArgument if the rate goes negative or above rate_cap.
PulseTrain pulse_train_from_rate(const std::function<double(double)>& rate, double width,
                                 double duration, double rate_cap, double step = 10e-6);

// z = w'r. Throws InvalidArgument on a length mismatch.
double readout(std::span<const double> r, std::span<const double> w);

// Per-synapse frequency normalised to [0, 1] over the oscillator range;
// 0 for a synapse below onset.
std::vector<double> normalized_state(std::span<const SynapseState> synapses,
                                     const SynapseParams& params);
void normalized_state(std::span<const SynapseState> synapses, const SynapseParams& params,
                      std::span<double> out);

// Running frequency estimate of each oscillator from its rising edges: an
// exponential window of time constant `tau` over the edge train, so a steady
// oscillation at f reads f.
class EdgeRateFilter {
public:
  EdgeRateFilter(std::size_t channels, double tau);

  // Decays by dt and adds the edges of the step that ended at `t_end`.
  void update(const Network& network, double t_end, double dt);
  std::span<const double> rates() const { return rates_; }

private:
  double tau_;
  std::vector<double> rates_;
};

/// Reciprocal frequency counter on each oscillator's rising edges.
///
/// Reads 1 / (latest edge interval), or 1 / (time since the latest edge)
/// once that is longer, so a stopped oscillator decays towards 0 instead of
/// holding its last value. Reads 0 until a channel has produced two edges.
class EdgeIntervalCounter {
public:
  explicit EdgeIntervalCounter(std::size_t channels);

  void update(const Network& network, double t_end);
  std::span<const double> frequencies() const { return freqs_; }

private:
  std::vector<double> last_;
  std::vector<double> interval_;
  std::vector<double> freqs_;
};

// Which oscillator observable feeds the readout.
enum class ReadoutSource {
  edge_interval,  // EdgeIntervalCounter over V_Ring edges
  edge_rate,      // EdgeRateFilter over V_Ring edges
  vsyn,           // osc_frequency(V_SYN), the noiseless control-voltage map
};

// Normalises frequencies to [0, 1] over [f_min, f_max]; 0 below f_min.
void normalize_frequencies(std::span<const double> freqs, double f_min, double f_max,
                           std::span<double> out);

struct Metrics {
  double nrmse = 0.0;
  double mean_abs_err = 0.0;
};

/// nrmse = rms(z - target) / std(target). Throws NumericalError when the
/// target is constant, InvalidArgument for misaligned or empty traces.
Metrics evaluate(std::span<const double> z, std::span<const double> target);

struct SineTarget {
  double frequency = 10.0;  // Hz
  double amplitude = 0.8;

  double operator()(double t) const;
  double period() const { return 1.0 / frequency; }

  friend bool operator==(const SineTarget&, const SineTarget&) = default;
};

struct TrainConfig {
  SineTarget target;
  // Teacher-forced run-in before learning starts, so RLS does not fit the
  // start-up transient of the synapses.
  int washout_periods = 1;
  int train_periods = 5;
  int test_periods = 2;
  double learn_interval = 1e-3;
  double rls_init_alpha = 1.0;
  // Feed the target back while learning; otherwise feed back z throughout.
  bool teacher_forcing = true;
  // Fraction of neurons whose feedback inputs are crossed (positive output
  // arrives on the inhibitory input), drawn with feedback_seed.
  double feedback_crossed_fraction = 0.5;
  std::uint64_t feedback_seed = 11;
  ReadoutSource readout_source = ReadoutSource::edge_interval;
  double readout_tau = 10e-3;  // s, EdgeRateFilter window (edge_rate only)
  // Seed of the untrained random readout used when train_periods == 0 and as
  // the baseline readout reported alongside every run.
  std::uint64_t readout_seed = 7;

  void validate(double network_dt) const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Learn-interval samples of the readout loop.
struct OutputTrace {
  std::vector<double> time;
  std::vector<double> z;
  std::vector<double> target;
  std::vector<std::uint8_t> phase;  // 2 washout, 1 learning, 0 autonomous
  AnalogSeries state;                  // r at each sample
  AnalogSeries feedback;               // excitatory / inhibitory rate (Hz)
};

struct TrainResult {
  RlsState rls;
  std::vector<double> random_readout;
  OutputTrace output;
  TraceSet traces;
  Metrics train;     // over the learning phase
  Metrics test;      // over the autonomous phase
  Metrics baseline;  // random readout on the autonomous-phase states
};

/// Runs the reservoir teacher-forced for washout_periods, trains w by RLS
/// every learn_interval for train_periods of the target, then freezes w and lets the network run on its own output for
/// test_periods. Feedback is broadcast to every neuron.
TrainResult train_force(const NetworkConfig& network, const TrainConfig& train,
                        const FeedbackParams& feedback, const TraceOptions& trace_options = {});

// Random readout weights, uniform on [-1, 1] / sqrt(n).
std::vector<double> random_readout(std::size_t n, std::uint64_t seed);

}  // namespace tdsnn
