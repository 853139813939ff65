#include "tdsnn/weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdsnn/errors.hpp"

namespace tdsnn {

PulseTrain::PulseTrain(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
  for (std::size_t i = 0; i < pulses_.size(); ++i) {
    const Pulse& p = pulses_[i];
    if (!std::isfinite(p.rise) || !(p.width > 0.0) || !std::isfinite(p.width)) {
      throw InvalidArgument("pulse train: pulse " + std::to_string(i) +
                            " has a non-finite rise or non-positive width");
    }
    if (i > 0) {
      const Pulse& prev = pulses_[i - 1];
      if (!(p.rise > prev.rise)) {
        throw InvalidArgument("pulse train: rise times must be strictly increasing");
      }
      if (prev.fall() > p.rise) {
        throw InvalidArgument("pulse train: pulse " + std::to_string(i - 1) +
                              " overlaps its successor");
      }
    }
  }
}

bool PulseTrain::is_high(double t) const {
  auto it = std::upper_bound(pulses_.begin(), pulses_.end(), t,
                             [](double time, const Pulse& p) { return time < p.rise; });
  if (it == pulses_.begin()) return false;
  return t < std::prev(it)->fall();
}

double PulseTrain::total_high_time() const {
  double total = 0.0;
  for (const Pulse& p : pulses_) total += p.width;
  return total;
}

WeightCode::WeightCode(int code) : code_(code) {
  if (code < kMin || code > kMax) {
    throw InvalidArgument("weight code " + std::to_string(code) + " outside [0, 15]");
  }
}

void WeightParams::validate() const {
  if (!(tau_unit > 0.0) || !std::isfinite(tau_unit)) {
    throw InvalidArgument("weight: tau_unit must be > 0");
  }
  if (!(w0 >= 0.0) || !std::isfinite(w0)) throw InvalidArgument("weight: w0 must be >= 0");
}

double pulse_width(WeightCode code, const WeightParams& params) {
  params.validate();
  return params.w0 + (code.value() + 1) * params.tau_unit;
}

PulseTrain shape_pulses(std::span<const double> rising_edges, WeightCode code,
                        const WeightParams& params) {
  const double width = pulse_width(code, params);
  std::vector<Pulse> pulses;
  pulses.reserve(rising_edges.size());
  for (std::size_t i = 0; i < rising_edges.size(); ++i) {
    if (i > 0 && !(rising_edges[i] > rising_edges[i - 1])) {
      throw InvalidArgument("shape_pulses: edges must be strictly increasing");
    }
    double w = width;
    if (i + 1 < rising_edges.size()) w = std::min(w, rising_edges[i + 1] - rising_edges[i]);
    pulses.push_back({rising_edges[i], w});
  }
  return PulseTrain(std::move(pulses));
}

PulseTrain merge_or(std::span<const PulseTrain> trains) {
  std::vector<Pulse> all;
  for (const PulseTrain& t : trains) all.insert(all.end(), t.pulses().begin(), t.pulses().end());
  std::sort(all.begin(), all.end(), [](const Pulse& a, const Pulse& b) { return a.rise < b.rise; });

  std::vector<Pulse> merged;
  for (const Pulse& p : all) {
    if (!merged.empty() && p.rise <= merged.back().fall()) {
      Pulse& last = merged.back();
      last.width = std::max(last.fall(), p.fall()) - last.rise;
    } else {
      merged.push_back(p);
    }
  }
  return PulseTrain(std::move(merged));
}

}  // namespace tdsnn
