#include "tdsnn/rls.hpp"

#include <cmath>

#include "tdsnn/errors.hpp"

namespace tdsnn {

RlsState RlsState::init(Eigen::Index n, double alpha) {
  if (n <= 0) throw InvalidArgument("rls: state dimension must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("rls: alpha must be > 0");
  RlsState s;
  s.w = Eigen::VectorXd::Zero(n);
  s.P = Eigen::MatrixXd::Identity(n, n) / alpha;
  return s;
}

void rls_update(RlsState& rls, const Eigen::Ref<const Eigen::VectorXd>& r, double z,
                double target) {
  const Eigen::Index n = rls.w.size();
  if (r.size() != n || rls.P.rows() != n || rls.P.cols() != n) {
    throw InvalidArgument("rls_update: state vector length does not match the readout");
  }
  if (!std::isfinite(z) || !std::isfinite(target) || !r.allFinite()) {
    throw NumericalError("rls_update: non-finite input");
  }

  const Eigen::VectorXd k = rls.P.selfadjointView<Eigen::Lower>() * r;
  const double denom = 1.0 + r.dot(k);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw NumericalError("rls_update: P lost positive definiteness");
  }
  const double c = 1.0 / denom;

  rls.P.selfadjointView<Eigen::Lower>().rankUpdate(k, -c);
  rls.P.triangularView<Eigen::StrictlyUpper>() = rls.P.transpose();
  rls.w -= (c * (z - target)) * k;
}

}  // namespace tdsnn
