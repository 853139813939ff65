#pragma once

#include <Eigen/Dense>

namespace tdsnn {

// Readout weights and inverse-correlation matrix of an online least-squares
// (FORCE) learner.
struct RlsState {
  Eigen::VectorXd w;
  Eigen::MatrixXd P;

  // w = 0, P = I / alpha. Throws InvalidArgument for n == 0 or alpha <= 0.
  static RlsState init(Eigen::Index n, double alpha);
};

/// One RLS step against `target` given the current readout `z` = w'r:
///   k = P r, c = 1 / (1 + r'k), P -= c k k', w -= c (z - target) k.
/// P is updated from its lower triangle and mirrored so it stays exactly
/// symmetric.
///
/// Throws InvalidArgument on a length mismatch, NumericalError on non-finite
/// input or a non-positive denominator.
void rls_update(RlsState& rls, const Eigen::Ref<const Eigen::VectorXd>& r, double z,
                double target);

}  // namespace tdsnn
