#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tdsnn/errors.hpp"
#include "tdsnn/synapse.hpp"

using namespace tdsnn;

namespace {

struct Drive {
  double mean_frequency = 0.0;
  double pre_spike_v = 0.0;
};

// Regular spikes at `rate` for `duration`; edges counted after `settle`.
Drive drive(const SynapseParams& p, double rate, double duration, double settle, double dt) {
  SynapseState s;
  const double period = 1.0 / rate;
  double next = 0.0;
  long edges = 0;
  Drive out;
  const auto steps = std::llround(duration / dt);
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool spike = t >= next - 1e-12;
    if (spike) {
      out.pre_spike_v = s.v_syn;
      next += period;
    }
    const auto r = synapse_step(s, p, spike, dt);
    s = r.state;
    if (r.rising_edge && t >= settle) ++edges;
  }
  out.mean_frequency = static_cast<double>(edges) / (duration - settle);
  return out;
}

}  // namespace

TEST(Synapse, RestIsAFixedPoint) {
  const SynapseParams p;
  SynapseState s;
  for (int k = 0; k < 10000; ++k) {
    const auto r = synapse_step(s, p, false, 10e-6);
    ASSERT_FALSE(r.rising_edge);
    s = r.state;
  }
  EXPECT_EQ(s.v_syn, 0.0);
}

TEST(Synapse, OneSpikeJustBelowOnsetStartsOscillation) {
  SynapseParams p;
  // Strong enough that one kick keeps the ring above onset for a full cycle.
  p.delta_up = 0.9;
  p.tau_leak = 50e-3;
  const double v0 = p.v_osc - 1e-3;
  EXPECT_EQ(osc_frequency(v0, p), 0.0);
  SynapseState s{v0, 0.0};
  auto r = synapse_step(s, p, true, 10e-6);
  EXPECT_GT(osc_frequency(r.state.v_syn, p), 0.0);
  EXPECT_GT(r.state.phase, 0.0);
  bool edge = false;
  for (int k = 0; k < 2000 && !edge; ++k) {
    r = synapse_step(r.state, p, false, 10e-6);
    edge = r.rising_edge.has_value();
  }
  EXPECT_TRUE(edge);
}

TEST(Synapse, FrequencyLaw) {
  const SynapseParams p;
  EXPECT_DOUBLE_EQ(osc_frequency(p.v_osc, p), 15.0);
  EXPECT_DOUBLE_EQ(osc_frequency(p.v_max, p), 200.0);
  EXPECT_EQ(osc_frequency(0.0, p), 0.0);
  EXPECT_NEAR(osc_frequency(0.5 * (p.v_osc + p.v_max), p), 107.5, 1e-9);
  double prev = 0.0;
  for (double v = 0.0; v <= 1.0; v += 1e-3) {
    const double f = osc_frequency(v, p);
    EXPECT_GE(f, prev);
    EXPECT_TRUE(f == 0.0 || (f >= p.f_min && f <= p.f_max));
    prev = f;
  }
}

TEST(Synapse, UndersampledOscillatorIsAConfigError) {
  SynapseParams p;
  p.f_max = 50000.0;
  EXPECT_THROW(synapse_step({}, p, false, 10e-6), ConfigError);
  EXPECT_NO_THROW(synapse_step({}, p, false, 9e-6));
  EXPECT_THROW(synapse_step({}, SynapseParams{}, false, 0.0), InvalidArgument);
}

TEST(Synapse, ParamValidation) {
  SynapseParams p;
  EXPECT_NO_THROW(p.validate());
  p.delta_up = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.v_osc = p.v_max;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.f_min = 300.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Synapse, DecaysStrictlyWithoutSpikesAndStaysBelowVmax) {
  const SynapseParams p;
  SynapseState s{0.9, 0.0};
  for (int k = 0; k < 5000; ++k) {
    const auto r = synapse_step(s, p, false, 10e-6);
    ASSERT_LT(r.state.v_syn, s.v_syn);
    s = r.state;
  }
  for (int k = 0; k < 5000; ++k) {
    s = synapse_step(s, p, true, 10e-6).state;
    ASSERT_LE(s.v_syn, p.v_max);
  }
}

TEST(Synapse, SteadyStateVoltageMatchesIteratedMap) {
  const SynapseParams p;
  for (double rate : {50.0, 100.0, 200.0, 226.0}) {
    const double fixed = oracle::vsyn_fixed_point(p.delta_up, p.tau_leak, p.v_max, 1.0 / rate);
    EXPECT_NEAR(steady_state_vsyn(rate, p), fixed, 1e-9 * std::max(1.0, fixed));
    const Drive d = drive(p, rate, 3.0, 2.0, 10e-6);
    EXPECT_NEAR(d.pre_spike_v, fixed, 0.01 * fixed) << "rate " << rate;
  }
}

TEST(Synapse, SteadyStateFrequencyMatchesLongSimulation) {
  const SynapseParams p;
  EXPECT_EQ(steady_state_frequency(0.0, p), 0.0);
  // Rates that divide the 10 us step evenly keep the simulated drive exactly
  // periodic.
  for (double rate : {50.0, 100.0, 125.0, 200.0, 250.0}) {
    const double model = steady_state_frequency(rate, p);
    const Drive d = drive(p, rate, 11.0, 1.0, 10e-6);
    EXPECT_NEAR(d.mean_frequency, model, 0.02 * model + 0.1) << "rate " << rate;
  }
}

TEST(Synapse, SteadyStateFrequencyNondecreasingInRate) {
  const SynapseParams p;
  double prev = 0.0;
  for (double rate = 0.0; rate <= 400.0; rate += 2.5) {
    const double f = steady_state_frequency(rate, p);
    EXPECT_GE(f, prev - 1e-9) << "rate " << rate;
    prev = f;
  }
}

TEST(Synapse, FreeRunDriveGivesNinetyHertz) {
  EXPECT_NEAR(steady_state_frequency(200.0, SynapseParams{}), 90.0, 0.05 * 90.0);
}

TEST(Synapse, EdgeCountAtConstantVoltage) {
  SynapseParams p;
  p.tau_leak = 1e9;  // effectively no leak
  for (double v : {0.35, 0.5, 0.77, 1.0}) {
    SynapseState s{v, 0.0};
    long edges = 0;
    const double window = 0.731;
    const auto steps = std::llround(window / 10e-6);
    for (long long k = 0; k < steps; ++k) {
      const auto r = synapse_step(s, p, false, 10e-6);
      edges += r.rising_edge.has_value();
      s = r.state;
    }
    EXPECT_NEAR(static_cast<double>(edges), std::round(osc_frequency(v, p) * window), 1.0);
  }
}

TEST(Synapse, SubOnsetPhaseModes) {
  SynapseParams p;
  SynapseState s{p.v_osc + 0.05, 0.0};
  for (int k = 0; k < 100; ++k) s = synapse_step(s, p, false, 10e-6).state;
  const double phase = s.phase;
  ASSERT_GT(phase, 0.0);
  SynapseState below{p.v_osc * 0.5, phase};
  EXPECT_EQ(synapse_step(below, p, false, 10e-6).state.phase, phase);
  p.sub_onset = SubOnsetPhase::reset;
  EXPECT_EQ(synapse_step(below, p, false, 10e-6).state.phase, 0.0);
}

TEST(Synapse, Deterministic) {
  const SynapseParams p;
  EXPECT_EQ(drive(p, 137.0, 1.0, 0.0, 10e-6).mean_frequency,
            drive(p, 137.0, 1.0, 0.0, 10e-6).mean_frequency);
}
