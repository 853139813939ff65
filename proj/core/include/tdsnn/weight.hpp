#pragma once

#include <span>
#include <vector>

#include "tdsnn/pulse_train.hpp"

namespace tdsnn {

// 4-bit multiplexer tap selection of the delay-line weight module.
class WeightCode {
public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 15;

  constexpr WeightCode() = default;
  // Throws InvalidArgument outside [0, 15].
  explicit WeightCode(int code);

  constexpr int value() const { return code_; }

  friend constexpr auto operator<=>(const WeightCode&, const WeightCode&) = default;

private:
  int code_ = 0;
};

struct WeightParams {
  double tau_unit = 50e-6;  // s, delay per inverter tap
  double w0 = 0.0;          // s, fixed base width

  void validate() const;

  friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

// w0 + (code + 1) * tau_unit; code 0 still passes a one-tap pulse.
double pulse_width(WeightCode code, const WeightParams& params);

/// One pulse per rising edge, width set by the weight code. A pulse that
/// would run past the next edge is cut at that edge.
/// Throws InvalidArgument if edges are not strictly increasing.
PulseTrain shape_pulses(std::span<const double> rising_edges, WeightCode code,
                        const WeightParams& params);

// Union of the high intervals of all inputs; touching pulses coalesce.
PulseTrain merge_or(std::span<const PulseTrain> trains);

}  // namespace tdsnn
