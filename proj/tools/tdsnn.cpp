// tdsnn: command-line front end for the time-domain SNN simulator.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime,
// numerical, I/O or calibration failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tdsnn/calibrate.hpp"
#include "tdsnn/config.hpp"
#include "tdsnn/errors.hpp"
#include "tdsnn/measure.hpp"
#include "tdsnn/network.hpp"
#include "tdsnn/reservoir.hpp"
#include "tdsnn/trace_io.hpp"

namespace fs = std::filesystem;
using namespace tdsnn;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunConfig load_or_default(const std::string& path, const RunConfig& defaults = {}) {
  return path.empty() ? defaults : load_config(path, defaults);
}

// "15:200" -> {15, 200}
std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("--range must look like FMIN:FMAX");
  std::size_t used = 0;
  try {
    const double lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    const std::string hi_text = text.substr(colon + 1);
    const double hi = std::stod(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidArgument("--range must look like FMIN:FMAX, got '" + text + "'");
  }
}

// ---- simulate-neuron ------------------------------------------------------

struct NeuronArgs {
  std::string config;
  double duration = 1.0;
  double input_freq = 100.0;
  int weight_code = 12;
  std::string polarity = "exc";
  std::string trace_dir;
};

int run_simulate_neuron(const NeuronArgs& a) {
  Stopwatch clock;
  RunConfig rc = load_or_default(a.config);
  NetworkConfig nc = rc.network;
  nc.n_neurons = 1;
  nc.connections = std::vector<Connection>{};
  Network net(nc);

  std::map<std::size_t, ExternalInput> inputs;
  if (a.polarity != "none" && a.input_freq > 0.0) {
    const PulseTrain train =
        shape_pulses(regular_edges(a.input_freq, a.duration), WeightCode(a.weight_code), nc.weight);
    if (a.polarity == "exc") {
      inputs[0].excitatory = train;
    } else {
      inputs[0].inhibitory = train;
    }
  }
  const TraceSet traces = simulate(net, inputs, a.duration);
  const auto& spikes = traces.spike_times[0];
  const double rate = static_cast<double>(spikes.size()) / a.duration;
  std::printf("spikes %zu  rate %.6g Hz", spikes.size(), rate);
  if (spikes.size() >= 2) {
    std::printf("  mean interval %.6g ms",
                1e3 * (spikes.back() - spikes.front()) / static_cast<double>(spikes.size() - 1));
  }
  std::printf("\n");

  if (!a.trace_dir.empty()) {
    RunSummary s;
    s.command = "simulate-neuron";
    s.config = serialize_config(rc);
    s.seed = nc.rng_seed;
    s.metrics = {{"firing_rate_hz", rate}, {"input_freq_hz", a.input_freq},
                 {"weight_code", a.weight_code}};
    s.wall_seconds = clock.seconds();
    write_traces(a.trace_dir, traces, s);
  }
  return 0;
}

// ---- simulate-synapse -----------------------------------------------------

struct SynapseArgs {
  std::string config;
  double duration = 5.0;
  double settle = 1.0;
  std::string drive = "none";
  double input_freq = 100.0;
  int weight_code = 12;
  std::string trace_dir;
};

int run_simulate_synapse(const SynapseArgs& a) {
  Stopwatch clock;
  const RunConfig rc = load_or_default(a.config);
  const NetworkConfig& nc = rc.network;
  DriveCase drive;
  drive.input_rate = a.input_freq;
  drive.code = WeightCode(a.weight_code);
  drive.kind = a.drive == "exc"   ? DriveKind::excitatory
               : a.drive == "inh" ? DriveKind::inhibitory
                                  : DriveKind::none;
  const DriveResult r =
      measure_drive(nc.neuron, nc.synapse, nc.weight, drive, a.duration, a.settle, nc.dt);
  const double analytic = steady_state_frequency(r.neuron_rate, nc.synapse);
  std::printf("neuron rate %.6g Hz  synapse mean frequency %.6g Hz  (periodic-drive model %.6g Hz)\n",
              r.neuron_rate, r.synapse_frequency, analytic);

  if (!a.trace_dir.empty()) {
    // Re-run through the trace recorder for the analog series.
    NetworkConfig single = nc;
    single.n_neurons = 1;
    single.connections = std::vector<Connection>{};
    Network net(single);
    std::map<std::size_t, ExternalInput> inputs;
    if (drive.kind != DriveKind::none) {
      const PulseTrain train =
          shape_pulses(regular_edges(drive.input_rate, a.duration), drive.code, nc.weight);
      (drive.kind == DriveKind::excitatory ? inputs[0].excitatory : inputs[0].inhibitory) = train;
    }
    const TraceSet traces = simulate(net, inputs, a.duration);
    RunSummary s;
    s.command = "simulate-synapse";
    s.config = serialize_config(rc);
    s.seed = nc.rng_seed;
    s.metrics = {{"neuron_rate_hz", r.neuron_rate},
                 {"synapse_frequency_hz", r.synapse_frequency},
                 {"periodic_model_frequency_hz", analytic}};
    s.wall_seconds = clock.seconds();
    write_traces(a.trace_dir, traces, s);
  }
  return 0;
}

// ---- network run ----------------------------------------------------------

struct NetworkArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  double duration = 1.0;
  std::string out_dir;
};

int run_network(const NetworkArgs& a) {
  Stopwatch clock;
  RunConfig rc = load_or_default(a.config);
  if (a.seed) rc.network.rng_seed = *a.seed;
  Network net(rc.network);
  const TraceSet traces = simulate(net, {}, a.duration);
  const auto counts = spike_counts(traces);
  std::size_t total = 0, silent = 0;
  for (auto c : counts) {
    total += c;
    silent += c == 0 ? 1 : 0;
  }
  const double mean_rate =
      static_cast<double>(total) / (a.duration * static_cast<double>(counts.size()));
  std::printf("neurons %zu  connections %zu  mean rate %.6g Hz  silent %zu\n", net.size(),
              net.connections().size(), mean_rate, silent);

  if (!a.out_dir.empty()) {
    RunSummary s;
    s.command = "network run";
    s.config = serialize_config(rc);
    s.seed = rc.network.rng_seed;
    s.metrics = {{"mean_rate_hz", mean_rate},
                 {"connections", static_cast<double>(net.connections().size())},
                 {"silent_neurons", static_cast<double>(silent)}};
    s.wall_seconds = clock.seconds();
    write_traces(a.out_dir, traces, s);
  }
  return 0;
}

// ---- reservoir ------------------------------------------------------------

struct ReservoirArgs {
  std::string config;
  std::string range;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool analog = false;
};

RunConfig reservoir_config(const ReservoirArgs& a) {
  RunConfig rc = load_or_default(a.config, reservoir_preset());
  if (!a.range.empty()) {
    const auto [lo, hi] = parse_range(a.range);
    rc.network.synapse.f_min = lo;
    rc.network.synapse.f_max = hi;
  }
  if (a.seed) rc.network.rng_seed = *a.seed;
  rc.validate();
  return rc;
}

int run_reservoir_train(const ReservoirArgs& a) {
  Stopwatch clock;
  const RunConfig rc = reservoir_config(a);
  const TrainResult r = train_force(rc.network, rc.train, rc.feedback,
                                    TraceOptions{true, a.analog, a.analog});
  std::printf("range %g:%g Hz  train NRMSE %.4f  autonomous NRMSE %.4f  random-readout NRMSE %.4f\n",
              rc.network.synapse.f_min, rc.network.synapse.f_max, r.train.nrmse, r.test.nrmse,
              r.baseline.nrmse);
  if (!a.out_dir.empty()) {
    RunSummary s;
    s.command = "reservoir train";
    s.config = serialize_config(rc);
    s.seed = rc.network.rng_seed;
    s.metrics = {{"train_nrmse", r.train.nrmse},
                 {"test_nrmse", r.test.nrmse},
                 {"test_mean_abs_err", r.test.mean_abs_err},
                 {"random_readout_nrmse", r.baseline.nrmse}};
    s.wall_seconds = clock.seconds();
    write_traces(a.out_dir, r.traces, s, &r.output);
  }
  return 0;
}

// Scores an output.csv written by `reservoir train` against the phase
// boundaries of the same config.
int run_reservoir_eval(const ReservoirArgs& a) {
  if (a.out_dir.empty()) throw InvalidArgument("reservoir eval: --out DIR is required");
  const RunConfig rc = reservoir_config(a);
  const auto rows = read_output_csv(fs::path(a.out_dir) / "output.csv");
  const double period = rc.train.target.period();
  const double start = rc.train.washout_periods * period;
  const double split = (rc.train.washout_periods + rc.train.train_periods) * period;
  const double half_dt = 0.5 * rc.network.dt;
  std::vector<double> z_train, y_train, z_test, y_test;
  for (const auto& row : rows) {
    if (row.time < start - half_dt) continue;
    auto& z = row.time < split - half_dt ? z_train : z_test;
    auto& y = row.time < split - half_dt ? y_train : y_test;
    z.push_back(row.z);
    y.push_back(row.target);
  }
  if (z_test.empty()) throw InvalidArgument("reservoir eval: output.csv has no autonomous samples");
  const Metrics test = evaluate(z_test, y_test);
  if (!z_train.empty()) {
    std::printf("train NRMSE %.4f  ", evaluate(z_train, y_train).nrmse);
  }
  std::printf("autonomous NRMSE %.4f  mean |error| %.4f  (%zu samples)\n", test.nrmse,
              test.mean_abs_err, z_test.size());
  return 0;
}

// ---- calibrate ------------------------------------------------------------

struct CalibrateArgs {
  std::string config;
  std::string targets = "paper";
  std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
  RunConfig rc = load_or_default(a.config);
  CalibrationTargets targets;
  if (a.targets == "paper") {
    targets = CalibrationTargets::measured();
  } else if (a.targets == "free-run") {
    targets.synapse.clear();
  } else {
    throw InvalidArgument("--targets must be 'paper' or 'free-run'");
  }
  CalibrationSettings settings;
  settings.dt = rc.network.dt;
  try {
    const Calibration cal =
        calibrate(targets, rc.network.neuron, rc.network.synapse, rc.network.weight, settings);
    rc.network.neuron = cal.neuron;
    rc.network.synapse = cal.synapse;
    std::fputs(format_residuals(cal.residuals).c_str(), stdout);
  } catch (const CalibrationError& e) {
    std::fprintf(stderr, "%s\n%s", e.what(), e.residuals().c_str());
    return kExitRuntime;
  }
  const std::string text = serialize_config(rc);
  if (a.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(a.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain spiking neural network simulator"};
  app.require_subcommand(1);

  NeuronArgs neuron;
  auto* sn = app.add_subcommand("simulate-neuron", "One neuron driven by a regular pulse source");
  sn->add_option("--config", neuron.config, "Config file for neuron/weight parameters");
  sn->add_option("--duration", neuron.duration, "Seconds")->check(CLI::PositiveNumber);
  sn->add_option("--input-freq", neuron.input_freq, "Source rate in Hz (0 for none)")
      ->check(CLI::NonNegativeNumber);
  sn->add_option("--weight-code", neuron.weight_code, "4-bit weight code")->check(CLI::Range(0, 15));
  sn->add_option("--polarity", neuron.polarity, "Input polarity")
      ->check(CLI::IsMember({"exc", "inh", "none"}));
  sn->add_option("--trace", neuron.trace_dir, "Write CSV traces and summary.json here");

  SynapseArgs synapse;
  auto* ss = app.add_subcommand("simulate-synapse",
                                "Neuron -> synapse chain; mean oscillator frequency");
  ss->add_option("--config", synapse.config, "Config file for model parameters");
  ss->add_option("--duration", synapse.duration, "Seconds")->check(CLI::PositiveNumber);
  ss->add_option("--settle", synapse.settle, "Seconds discarded before counting")
      ->check(CLI::NonNegativeNumber);
  ss->add_option("--drive", synapse.drive, "Source on the neuron's input")
      ->check(CLI::IsMember({"none", "exc", "inh"}));
  ss->add_option("--input-freq", synapse.input_freq, "Source rate in Hz")->check(CLI::PositiveNumber);
  ss->add_option("--weight-code", synapse.weight_code, "4-bit weight code")
      ->check(CLI::Range(0, 15));
  ss->add_option("--trace", synapse.trace_dir, "Write CSV traces and summary.json here");

  NetworkArgs network;
  auto* net = app.add_subcommand("network", "Network simulation");
  net->require_subcommand(1);
  auto* nr = net->add_subcommand("run", "Free-running network");
  nr->add_option("--config", network.config, "Config file")->required();
  nr->add_option("--seed", network.seed, "Topology seed (overrides the config)");
  nr->add_option("--duration", network.duration, "Seconds")->check(CLI::PositiveNumber);
  nr->add_option("--out", network.out_dir, "Write CSV traces and summary.json here");

  ReservoirArgs reservoir;
  auto* res = app.add_subcommand("reservoir", "Reservoir computing with an RLS readout");
  res->require_subcommand(1);
  auto* rt = res->add_subcommand("train", "Train the readout on the target, then run autonomously");
  auto* re = res->add_subcommand("eval", "Score the output.csv of a previous train run");
  for (auto* sub : {rt, re}) {
    sub->add_option("--config", reservoir.config, "Config file (defaults to the reservoir preset)");
    sub->add_option("--range", reservoir.range, "Synapse tuning range FMIN:FMAX in Hz");
    sub->add_option("--seed", reservoir.seed, "Topology seed (overrides the config)");
  }
  rt->add_option("--out", reservoir.out_dir, "Write CSV traces and summary.json here");
  rt->add_flag("--analog", reservoir.analog, "Also record membrane and synapse traces");
  re->add_option("--out", reservoir.out_dir, "Directory holding output.csv")->required();

  CalibrateArgs cal;
  auto* ca = app.add_subcommand("calibrate", "Fit neuron and synapse parameters to anchors");
  ca->add_option("--config", cal.config, "Starting parameters");
  ca->add_option("--targets", cal.targets, "Anchor set")
      ->check(CLI::IsMember({"paper", "free-run"}));
  ca->add_option("--out", cal.out, "Write the fitted config here (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*sn) return run_simulate_neuron(neuron);
    if (*ss) return run_simulate_synapse(synapse);
    if (*nr) return run_network(network);
    if (*rt) return run_reservoir_train(reservoir);
    if (*re) return run_reservoir_eval(reservoir);
    if (*ca) return run_calibrate(cal);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
