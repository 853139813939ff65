#include "tdsnn/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "tdsnn/errors.hpp"
#include "tdsnn/rng.hpp"
#include "trace_recorder.hpp"

namespace tdsnn {

void FeedbackParams::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw InvalidArgument("feedback: gain must be > 0");
  if (!(f_fb_max > 0.0) || !std::isfinite(f_fb_max)) {
    throw InvalidArgument("feedback: f_fb_max must be > 0");
  }
  if (!(pulse_width > 0.0)) throw InvalidArgument("feedback: pulse_width must be > 0");
  if (pulse_width >= 1.0 / f_fb_max) {
    throw ConfigError("feedback: pulse_width must be shorter than 1 / f_fb_max");
  }
}

FeedbackRates encode_feedback(double z, const FeedbackParams& params) {
  return {std::min(params.gain * std::max(z, 0.0), params.f_fb_max),
          std::min(params.gain * std::max(-z, 0.0), params.f_fb_max)};
}

std::optional<double> RatePulseGenerator::advance(double t, double rate, double dt) {
  if (rate <= 0.0) return std::nullopt;
  const double before = phase_;
  phase_ += rate * dt;
  if (phase_ < 1.0) return std::nullopt;
  phase_ -= 1.0;
  last_rise_ = t + (1.0 - before) / rate;
  return last_rise_;
}

PulseTrain pulse_train_from_rate(const std::function<double(double)>& rate, double width,
                                 double duration, double rate_cap, double step) {
  if (!(width > 0.0)) throw InvalidArgument("pulse_train_from_rate: width must be > 0");
  if (!(rate_cap > 0.0)) throw InvalidArgument("pulse_train_from_rate: rate cap must be > 0");
  if (width >= 1.0 / rate_cap) {
    throw ConfigError("pulse_train_from_rate: width must be shorter than the minimum gap 1/" +
                      std::to_string(rate_cap) + " s");
  }
  if (!(step > 0.0) || !(duration >= 0.0)) {
    throw InvalidArgument("pulse_train_from_rate: step must be > 0 and duration >= 0");
  }

  // Starting at half a cycle makes the emitted count round the integrated
  // rate instead of flooring it.
  RatePulseGenerator gen(width, 0.5);
  std::vector<Pulse> pulses;
  const auto steps = static_cast<std::int64_t>(std::ceil(duration / step - 1e-9));
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * step;
    const double h = std::min(step, duration - t);
    const double f = rate(t + 0.5 * h);
    if (!(f >= 0.0) || f > rate_cap) {
      throw InvalidArgument("pulse_train_from_rate: rate " + std::to_string(f) +
                            " outside [0, cap] at t=" + std::to_string(t));
    }
    if (auto rise = gen.advance(t, f, h)) pulses.push_back({*rise, width});
  }
  return PulseTrain(std::move(pulses));
}

double readout(std::span<const double> r, std::span<const double> w) {
  if (r.size() != w.size()) throw InvalidArgument("readout: state and weight lengths differ");
  double z = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) z += w[i] * r[i];
  return z;
}

void normalized_state(std::span<const SynapseState> synapses, const SynapseParams& params,
                      std::span<double> out) {
  if (out.size() != synapses.size()) {
    throw InvalidArgument("normalized_state: output length differs from synapse count");
  }
  const double span = params.f_max - params.f_min;
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    const double f = osc_frequency(synapses[i].v_syn, params);
    out[i] = (f <= 0.0 || span <= 0.0) ? 0.0 : std::clamp((f - params.f_min) / span, 0.0, 1.0);
  }
}

std::vector<double> normalized_state(std::span<const SynapseState> synapses,
                                     const SynapseParams& params) {
  std::vector<double> r(synapses.size());
  normalized_state(synapses, params, r);
  return r;
}

EdgeRateFilter::EdgeRateFilter(std::size_t channels, double tau)
    : tau_(tau), rates_(channels, 0.0) {
  if (!(tau > 0.0)) throw InvalidArgument("edge rate filter: tau must be > 0");
}

void EdgeRateFilter::update(const Network& network, double t_end, double dt) {
  if (network.size() != rates_.size()) {
    throw InvalidArgument("edge rate filter: channel count differs from the network");
  }
  const double decay = std::exp(-dt / tau_);
  const auto edged = network.edged();
  const auto edges = network.last_edge_times();
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    rates_[i] *= decay;
    if (edged[i]) rates_[i] += std::exp(-(t_end - edges[i]) / tau_) / tau_;
  }
}

EdgeIntervalCounter::EdgeIntervalCounter(std::size_t channels)
    : last_(channels, -std::numeric_limits<double>::infinity()),
      interval_(channels, std::numeric_limits<double>::infinity()),
      freqs_(channels, 0.0) {}

void EdgeIntervalCounter::update(const Network& network, double t_end) {
  if (network.size() != freqs_.size()) {
    throw InvalidArgument("edge interval counter: channel count differs from the network");
  }
  const auto edged = network.edged();
  const auto edges = network.last_edge_times();
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    if (edged[i]) {
      interval_[i] = edges[i] - last_[i];
      last_[i] = edges[i];
    }
    const double span = std::max(interval_[i], t_end - last_[i]);
    freqs_[i] = std::isfinite(span) && span > 0.0 ? 1.0 / span : 0.0;
  }
}

void normalize_frequencies(std::span<const double> freqs, double f_min, double f_max,
                           std::span<double> out) {
  if (out.size() != freqs.size()) {
    throw InvalidArgument("normalize_frequencies: output length differs from input");
  }
  const double span = f_max - f_min;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    out[i] = span <= 0.0 ? 0.0 : std::clamp((freqs[i] - f_min) / span, 0.0, 1.0);
  }
}

Metrics evaluate(std::span<const double> z, std::span<const double> target) {
  if (z.size() != target.size()) throw InvalidArgument("evaluate: traces are not aligned");
  if (z.empty()) throw InvalidArgument("evaluate: empty traces");
  const auto n = static_cast<double>(z.size());

  double mean = 0.0;
  for (double y : target) mean += y;
  mean /= n;

  double err2 = 0.0, abs_err = 0.0, var = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double e = z[i] - target[i];
    err2 += e * e;
    abs_err += std::abs(e);
    var += (target[i] - mean) * (target[i] - mean);
  }
  const bool constant =
      std::adjacent_find(target.begin(), target.end(), std::not_equal_to<>{}) == target.end();
  if (constant || !(var > 0.0)) {
    throw NumericalError("evaluate: target is constant, NRMSE is undefined");
  }
  return {std::sqrt(err2 / var), abs_err / n};
}

double SineTarget::operator()(double t) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
}

void TrainConfig::validate(double network_dt) const {
  if (!(target.frequency > 0.0)) throw InvalidArgument("train: target frequency must be > 0");
  if (!std::isfinite(target.amplitude)) throw InvalidArgument("train: amplitude must be finite");
  if (washout_periods < 0) throw InvalidArgument("train: washout_periods must be >= 0");
  if (train_periods < 0) throw InvalidArgument("train: train_periods must be >= 0");
  if (test_periods < 1) throw InvalidArgument("train: test_periods must be >= 1");
  if (!(learn_interval >= network_dt)) {
    throw InvalidArgument("train: learn_interval must be >= the network dt");
  }
  if (!(rls_init_alpha > 0.0)) throw InvalidArgument("train: rls_init_alpha must be > 0");
}

std::vector<double> random_readout(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(-1.0, 1.0) * scale;
  return w;
}

TrainResult train_force(const NetworkConfig& network_config, const TrainConfig& train,
                        const FeedbackParams& feedback, const TraceOptions& trace_options) {
  const NetworkConfig& config = network_config;
  train.validate(config.dt);
  feedback.validate();
  Network net(config);

  const std::size_t n = net.size();
  const double dt = net.dt();
  const auto learn_every = std::max<std::int64_t>(1, std::llround(train.learn_interval / dt));
  const double period = train.target.period();
  const double train_start = train.washout_periods * period;
  const double train_end = (train.washout_periods + train.train_periods) * period;
  const double duration = train_end + train.test_periods * period;
  const auto steps = static_cast<std::int64_t>(std::llround(duration / dt));

  TrainResult result;
  result.rls = RlsState::init(static_cast<Eigen::Index>(n), train.rls_init_alpha);
  result.random_readout = random_readout(n, train.readout_seed);
  if (train.train_periods == 0) {
    result.rls.w = Eigen::Map<const Eigen::VectorXd>(result.random_readout.data(),
                                                     static_cast<Eigen::Index>(n));
  }

  OutputTrace& out = result.output;
  out.state.channels = n;
  out.feedback.channels = 2;

  detail::TraceRecorder recorder(net, duration, trace_options);
  RatePulseGenerator exc_gen(feedback.pulse_width);
  RatePulseGenerator inh_gen(feedback.pulse_width);
  std::vector<std::uint8_t> exc(n, 0), inh(n, 0);
  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  FeedbackRates rates;
  EdgeRateFilter edge_rates(n, train.readout_tau);
  EdgeIntervalCounter edge_counter(n);
  std::vector<std::uint8_t> crossed(n, 0);
  {
    Rng rng(train.feedback_seed);
    for (auto& c : crossed) c = rng.uniform() < train.feedback_crossed_fraction ? 1 : 0;
  }

  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = net.time();
    if (k % learn_every == 0) {
      const std::span<double> rs(r.data(), n);
      switch (train.readout_source) {
        case ReadoutSource::edge_interval:
          normalize_frequencies(edge_counter.frequencies(), config.synapse.f_min,
                                config.synapse.f_max, rs);
          break;
        case ReadoutSource::edge_rate:
          normalize_frequencies(edge_rates.rates(), config.synapse.f_min, config.synapse.f_max,
                                rs);
          break;
        case ReadoutSource::vsyn:
          normalized_state(net.synapses(), config.synapse, rs);
          break;
      }
      const double z = result.rls.w.dot(r);
      const double target = train.target(t);
      const bool washout = t < train_start - 0.5 * dt;
      const bool learning = !washout && t < train_end - 0.5 * dt;
      if (learning) rls_update(result.rls, r, z, target);

      const bool forced = (washout || learning) && train.teacher_forcing;
      rates = encode_feedback(forced ? target : z, feedback);

      out.time.push_back(t);
      out.z.push_back(z);
      out.target.push_back(target);
      out.phase.push_back(washout ? 2 : learning ? 1 : 0);
      out.state.values.insert(out.state.values.end(), r.data(), r.data() + n);
      out.feedback.values.push_back(rates.excitatory);
      out.feedback.values.push_back(rates.inhibitory);
    }

    exc_gen.advance(t, rates.excitatory, dt);
    inh_gen.advance(t, rates.inhibitory, dt);
    const double midpoint = t + 0.5 * dt;
    const std::uint8_t pos = exc_gen.is_high(midpoint) ? 1 : 0;
    const std::uint8_t neg = inh_gen.is_high(midpoint) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      exc[i] = crossed[i] ? neg : pos;
      inh[i] = crossed[i] ? pos : neg;
    }

    recorder.before_step(net, k);
    net.step(exc, inh);
    edge_rates.update(net, net.time(), dt);
    edge_counter.update(net, net.time());
    recorder.after_step(net);
  }
  result.traces = recorder.take();

  // Split the samples into the learning and autonomous phases.
  std::vector<double> z_train, y_train, z_test, y_test, z_base;
  for (std::size_t s = 0; s < out.time.size(); ++s) {
    if (out.phase[s] == 2) continue;
    if (out.phase[s] == 1) {
      z_train.push_back(out.z[s]);
      y_train.push_back(out.target[s]);
    } else {
      z_test.push_back(out.z[s]);
      y_test.push_back(out.target[s]);
      const std::span<const double> rs(out.state.values.data() + s * n, n);
      z_base.push_back(readout(rs, result.random_readout));
    }
  }
  if (!z_train.empty()) result.train = evaluate(z_train, y_train);
  result.test = evaluate(z_test, y_test);
  result.baseline = evaluate(z_base, y_test);
  return result;
}

}  // namespace tdsnn
