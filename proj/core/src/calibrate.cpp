#include "tdsnn/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tdsnn/errors.hpp"

namespace tdsnn {
namespace {

// Search coordinates: delta_up, ln(tau_leak), v_osc / v_max.
using Point = std::array<double, 3>;

constexpr Point kLower{0.01, -8.0, 0.0};   // tau >= 0.34 ms
constexpr Point kUpper{1.0, 0.0, 0.98};    // tau <= 1 s

SynapseParams to_params(const Point& x, SynapseParams params) {
  params.delta_up = x[0];
  params.tau_leak = std::exp(x[1]);
  params.v_osc = x[2] * params.v_max;
  return params;
}

struct Problem {
  SynapseParams base;
  std::vector<double> drive_rates;  // neuron spike rate per anchor
  std::vector<double> goals;        // analytic frequency to aim for
  std::vector<double> scales;       // anchor targets, for relative errors

  double cost(const Point& x) const {
    const SynapseParams p = to_params(x, base);
    double sum = 0.0;
    for (std::size_t i = 0; i < goals.size(); ++i) {
      const double e = (steady_state_frequency(drive_rates[i], p) - goals[i]) / scales[i];
      sum += e * e;
    }
    return sum;
  }
};

// Compass search with step halving; bounds are enforced by clamping.
std::pair<Point, double> pattern_search(const Problem& problem, Point x) {
  Point step{0.1, 0.5, 0.1};
  double best = problem.cost(x);
  for (int iter = 0; iter < 4000 && step[0] > 1e-9; ++iter) {
    bool moved = false;
    for (std::size_t d = 0; d < x.size(); ++d) {
      for (double sign : {1.0, -1.0}) {
        Point y = x;
        y[d] = std::clamp(y[d] + sign * step[d], kLower[d], kUpper[d]);
        const double c = problem.cost(y);
        if (c < best) {
          best = c;
          x = y;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      for (double& s : step) s *= 0.5;
    }
  }
  return {x, best};
}

Point fit(const Problem& problem, const Point* warm_start) {
  Point best_x{};
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& start) {
    auto [x, c] = pattern_search(problem, start);
    if (c < best) {
      best = c;
      best_x = x;
    }
  };
  if (warm_start != nullptr) {
    consider(*warm_start);
    if (best < 1e-12) return best_x;
  }
  for (double d : {0.2, 0.5, 0.8}) {
    for (double tau : {3e-3, 10e-3, 30e-3}) {
      for (double v : {0.1, 0.3, 0.6}) consider({d, std::log(tau), v});
    }
  }
  return best_x;
}

double simulated_free_run(const NeuronParams& neuron, double dt) {
  NeuronState state;
  int spikes = 0;
  const auto steps = static_cast<long>(std::llround(1.0 / dt));
  for (long k = 0; k < steps; ++k) {
    const auto r = neuron_step(state, neuron, false, false, dt);
    state = r.state;
    spikes += r.fired ? 1 : 0;
  }
  return spikes;  // per second
}

}  // namespace

CalibrationTargets CalibrationTargets::measured() {
  CalibrationTargets t;
  t.synapse = {
      {"inhibited", {DriveKind::inhibitory, 100.0, WeightCode{12}}, 41.0, 0.15},
      {"no_input", {DriveKind::none, 100.0, WeightCode{12}}, 90.0, 0.05},
      {"excited", {DriveKind::excitatory, 100.0, WeightCode{12}}, 98.0, 0.05},
  };
  return t;
}

bool AnchorResidual::within_tolerance() const {
  return std::abs(relative_error()) <= tolerance;
}

Calibration calibrate(const CalibrationTargets& targets, const NeuronParams& neuron,
                      const SynapseParams& synapse, const WeightParams& weight,
                      const CalibrationSettings& settings) {
  if (!(targets.free_run_hz > 0.0)) throw InvalidArgument("calibrate: free-run target must be > 0");
  for (const auto& a : targets.synapse) {
    if (!(a.target_hz > 0.0) || !(a.tolerance > 0.0)) {
      throw InvalidArgument("calibrate: anchor '" + a.name + "' needs target and tolerance > 0");
    }
  }

  Calibration out;
  out.neuron = neuron;
  out.neuron.r_base = neuron.v_th * targets.free_run_hz;
  out.neuron.validate();
  out.synapse = synapse;
  out.residuals.push_back({"free_run", targets.free_run_hz,
                           simulated_free_run(out.neuron, settings.dt),
                           targets.free_run_tolerance});

  if (!targets.synapse.empty()) {
    auto run = [&](const SynapseAnchor& a, const SynapseParams& p) {
      return measure_drive(out.neuron, p, weight, a.drive, settings.duration, settings.settle,
                           settings.dt);
    };

    Problem problem;
    problem.base = synapse;
    for (const auto& a : targets.synapse) {
      // The neuron side does not depend on the synapse parameters.
      problem.drive_rates.push_back(run(a, synapse).neuron_rate);
      problem.goals.push_back(a.target_hz);
      problem.scales.push_back(a.target_hz);
    }

    // The analytic model assumes a perfectly periodic drive; correct its
    // goals by the simulated/target ratio until the simulation agrees.
    Point x = fit(problem, nullptr);
    std::vector<AnchorResidual> best_res;
    double best_worst = std::numeric_limits<double>::infinity();
    for (int round = 0; round <= settings.refinements; ++round) {
      const SynapseParams p = to_params(x, synapse);
      std::vector<AnchorResidual> res;
      double worst = 0.0;
      for (const auto& a : targets.synapse) {
        res.push_back({a.name, a.target_hz, run(a, p).synapse_frequency, a.tolerance});
        worst = std::max(worst, std::abs(res.back().relative_error()) / a.tolerance);
      }
      if (worst < best_worst) {
        best_worst = worst;
        best_res = res;
        out.synapse = p;
      }
      if (worst <= 0.25 || round == settings.refinements) break;
      for (std::size_t i = 0; i < res.size(); ++i) {
        if (res[i].achieved_hz > 0.0) problem.goals[i] *= res[i].target_hz / res[i].achieved_hz;
      }
      x = fit(problem, &x);
    }
    out.residuals.insert(out.residuals.end(), best_res.begin(), best_res.end());
  }

  for (const auto& r : out.residuals) {
    if (!r.within_tolerance()) {
      throw CalibrationError("calibrate: anchor '" + r.name + "' is out of tolerance",
                             format_residuals(out.residuals));
    }
  }
  return out;
}

std::string format_residuals(const std::vector<AnchorResidual>& residuals) {
  std::string text;
  char line[160];
  for (const auto& r : residuals) {
    std::snprintf(line, sizeof line, "%-10s target %8.3f Hz  achieved %8.3f Hz  error %+7.3f%%  (tol %.1f%%)\n",
                  r.name.c_str(), r.target_hz, r.achieved_hz, 100.0 * r.relative_error(),
                  100.0 * r.tolerance);
    text += line;
  }
  return text;
}

}  // namespace tdsnn
