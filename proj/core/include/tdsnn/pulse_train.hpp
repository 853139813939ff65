#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tdsnn {

struct Pulse {
  double rise = 0.0;   // s
  double width = 0.0;  // s, > 0

  double fall() const { return rise + width; }

  friend bool operator==(const Pulse&, const Pulse&) = default;
};

// Ordered, non-overlapping digital pulses. Touching pulses (one falls exactly
// where the next rises) are allowed; overlapping ones are not.
class PulseTrain {
public:
  PulseTrain() = default;
  // Throws InvalidArgument if rises are not strictly increasing, a width is
  // not positive, or two pulses overlap.
  explicit PulseTrain(std::vector<Pulse> pulses);

  const std::vector<Pulse>& pulses() const { return pulses_; }
  std::size_t size() const { return pulses_.size(); }
  bool empty() const { return pulses_.empty(); }

  // Level at time t; pulses are high on [rise, fall).
  bool is_high(double t) const;
  double total_high_time() const;

  friend bool operator==(const PulseTrain&, const PulseTrain&) = default;

private:
  std::vector<Pulse> pulses_;
};

// Forward-only sampler for a pulse train queried at nondecreasing times.
class PulseCursor {
public:
  explicit PulseCursor(const PulseTrain& train) : pulses_(train.pulses()) {}

  bool is_high(double t) {
    while (next_ < pulses_.size() && pulses_[next_].fall() <= t) ++next_;
    return next_ < pulses_.size() && pulses_[next_].rise <= t;
  }

private:
  std::span<const Pulse> pulses_;
  std::size_t next_ = 0;
};

}  // namespace tdsnn
