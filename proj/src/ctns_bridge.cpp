#include "cpeps/ctns_bridge.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cpeps {

namespace {

void check_shape(const CTNSGaussianData& d) {
  const Index n = d.V_quad.rows();
  if (n < 1 || d.V_quad.cols() != n || d.kinetic.rows() != n || d.kinetic.cols() != n ||
      d.curvature.rows() != n || d.curvature.cols() != n || d.f_lin.size() != n || d.f_grad.size() != n) {
    throw Error(ErrorKind::ShapeMismatch, "CTNS blocks must be DxD / length D");
  }
}

double diff(const MatrixXc& x, const MatrixXc& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return std::numeric_limits<double>::infinity();
  return x.size() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

CTNSGaussianData make_local_ctns(MatrixXc v_quad, MatrixXc kinetic, VectorXc f_lin) {
  CTNSGaussianData d;
  const Index n = v_quad.rows();
  d.V_quad = std::move(v_quad);
  d.kinetic = std::move(kinetic);
  d.f_lin = std::move(f_lin);
  d.curvature = MatrixXc::Zero(n, n);
  d.f_grad = VectorXc::Zero(n);
  return d;
}

GaussianParams ctns_to_cpeps_kernel(const CTNSGaussianData& data) {
  check_shape(data);
  const MatrixXc leftover = data.curvature + data.f_grad * data.f_grad.transpose();
  const double scale = std::max(1.0, data.curvature.cwiseAbs().maxCoeff());
  if (leftover.cwiseAbs().maxCoeff() > 1e-12 * scale) {
    // A k^4 term survives in the virtual block.
    throw Error(ErrorKind::NonGaussianInput, "curvature term has no first-derivative cPEPS form");
  }
  if (!(data.scale > 0.0)) throw Error(ErrorKind::NonPositiveC, "scale must be positive");
  const double s = std::sqrt(2.0 * data.scale);
  GaussianParams p;
  p.A = data.V_quad + data.f_lin * data.f_lin.transpose();
  p.Z = data.kinetic + data.f_lin * data.f_grad.transpose() + data.f_grad * data.f_lin.transpose();
  p.a = s * data.f_lin;
  p.z = s * data.f_grad;
  p.c = data.scale;
  return p;
}

CTNSGaussianData cpeps_to_ctns(const GaussianParams& p) {
  validate_shape(p);
  if (!(p.c > 0.0)) throw Error(ErrorKind::NonPositiveC, "c must be positive");
  const double s = std::sqrt(2.0 * p.c);
  CTNSGaussianData d;
  d.scale = p.c;
  d.f_lin = p.a / s;
  d.f_grad = p.z / s;
  d.V_quad = p.A - d.f_lin * d.f_lin.transpose();
  d.kinetic = p.Z - d.f_lin * d.f_grad.transpose() - d.f_grad * d.f_lin.transpose();
  d.curvature = -d.f_grad * d.f_grad.transpose();
  return d;
}

double max_abs_difference(const CTNSGaussianData& x, const CTNSGaussianData& y) {
  return std::max({diff(x.V_quad, y.V_quad), diff(x.kinetic, y.kinetic), diff(x.curvature, y.curvature),
                   diff(x.f_lin, y.f_lin), diff(x.f_grad, y.f_grad), std::abs(x.scale - y.scale)});
}

double max_abs_difference(const GaussianParams& x, const GaussianParams& y) {
  return std::max({diff(x.A, y.A), diff(x.Z, y.Z), diff(x.a, y.a), diff(x.z, y.z), std::abs(x.c - y.c)});
}

}  // namespace cpeps
