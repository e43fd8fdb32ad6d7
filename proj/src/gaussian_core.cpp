#include "cpeps/gaussian_core.hpp"

#include <cmath>
#include <numbers>

#include "cpeps/polynomial.hpp"

namespace cpeps {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kConditionLimit = 1e12;
constexpr double kCancelTol = 1e-10;
constexpr double kPoleTol = 1e-14;
constexpr double kImagTol = 1e-9;

MatrixXc system_matrix(const GaussianParams& p, Complex u) { return p.A + p.Z * u; }
VectorXc source_vector(const GaussianParams& p, Complex u) { return p.a + p.z * u; }

bool symmetric(const MatrixXc& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol * scale;
}

}  // namespace

void validate_shape(const GaussianParams& p) {
  const Index d = p.A.rows();
  if (d < 1 || p.A.cols() != d || p.Z.rows() != d || p.Z.cols() != d || p.z.size() != d ||
      p.a.size() != d) {
    throw Error(ErrorKind::ShapeMismatch, "GaussianParams blocks must be DxD / length D with D >= 1");
  }
}

bool is_admissible(const GaussianParams& p, double u_max, int samples) {
  validate_shape(p);
  if (!(p.c > 0.0) || !symmetric(p.A) || !symmetric(p.Z)) return false;
  for (int i = 1; i <= samples; ++i) {
    const double u = u_max * i / samples;
    const MatrixXd re = (p.A + p.Z * u).real();
    Eigen::LLT<MatrixXd> llt(re);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

bool certify_physical(const RationalDispersion& r, double u_max) {
  constexpr int kSamples = 256;
  for (int i = 0; i < kSamples; ++i) {
    const double u = u_max * i / (kSamples - 1);
    const Complex den = poly::horner(r.den, u);
    if (std::abs(den) < kPoleTol * poly::max_abs(r.den)) return false;
    const Complex w = poly::horner(r.num, u) / den;
    if (!(w.real() > 0.0) || std::abs(w.imag()) >= kImagTol * w.real()) return false;
  }
  return true;
}

RationalDispersion make_rational(VectorXc num, VectorXc den, double domain_max, double base_point) {
  if (num.size() == 0 || den.size() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "empty coefficient array");
  }
  const Complex q0 = den[0];
  if (std::abs(q0) <= kPoleTol * poly::max_abs(den)) {
    throw Error(ErrorKind::DegenerateDenominator, "den(0) = 0, cannot normalise q0 = 1");
  }
  RationalDispersion r;
  r.num = num / q0;
  r.den = den / q0;
  r.den[0] = Complex(1.0, 0.0);
  r.domain_max = domain_max;
  r.base_point = base_point;
  r.physical = certify_physical(r, domain_max);
  return r;
}

Complex rational_eval(const RationalDispersion& r, double u) {
  if (u < 0.0) throw Error(ErrorKind::DomainError, "u must be non-negative");
  const Complex den = poly::horner(r.den, u);
  if (std::abs(den) < kPoleTol * poly::max_abs(r.den)) {
    throw Error(ErrorKind::PoleError, "denominator vanishes at u = " + std::to_string(u));
  }
  return poly::horner(r.num, u) / den;
}

Complex eval_dispersion_schur(const GaussianParams& p, double u) {
  validate_shape(p);
  if (u < 0.0) throw Error(ErrorKind::DomainError, "u must be non-negative");
  // At k = 0 with a = 0 the virtual fields decouple from phi.
  if (u == 0.0 && p.a.isZero(0.0)) return Complex(p.c, 0.0);

  const MatrixXc m = system_matrix(p, u);
  const VectorXc b = source_vector(p, u);
  Eigen::PartialPivLU<MatrixXc> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kConditionLimit)) {
    throw Error(ErrorKind::SingularSystem, "A + Z u is numerically singular (rcond " +
                                               std::to_string(rcond) + ")");
  }
  const VectorXc x = lu.solve(b);
  return p.c + 0.5 * (b.transpose() * x).value();
}

EliminationTrace eliminate_chain(const GaussianParams& p, double u) {
  validate_shape(p);
  if (!(u > 0.0)) throw Error(ErrorKind::DomainError, "chain elimination needs u > 0");
  const Index d = p.D();
  MatrixXc m = system_matrix(p, u);
  VectorXc b = source_vector(p, u);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (std::abs(i - j) > 1 && (std::abs(p.A(i, j)) > 1e-14 || std::abs(p.Z(i, j)) > 1e-14)) {
        throw Error(ErrorKind::TopologyError, "A + Z u is not tridiagonal");
      }
    }
  }

  EliminationTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(d));
  Complex omega = p.c;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  for (Index alpha = d - 1; alpha >= 0; --alpha) {
    const Complex g = m(alpha, alpha);
    if (std::abs(g) < scale / kConditionLimit) {
      throw Error(ErrorKind::SingularSystem, "vanishing pivot while eliminating field " +
                                                 std::to_string(alpha + 1));
    }
    trace.steps.push_back({alpha + 1, g});
    omega += 0.5 * b[alpha] * b[alpha] / g;
    if (alpha > 0) {
      const Complex t = m(alpha - 1, alpha);
      m(alpha - 1, alpha - 1) -= t * t / g;
      b[alpha - 1] -= t * b[alpha] / g;
    }
  }
  trace.final_omega = omega;
  return trace;
}

AdjugateSample adjugate_sample(const GaussianParams& p, Complex u) {
  const Index d = p.D();
  const MatrixXc m = system_matrix(p, u);
  const VectorXc b = source_vector(p, u);
  MatrixXc bordered = MatrixXc::Zero(d + 1, d + 1);
  bordered.topLeftCorner(d, d) = m;
  bordered.topRightCorner(d, 1) = b;
  bordered.bottomLeftCorner(1, d) = b.transpose();
  const Complex det = m.fullPivLu().determinant();
  const Complex quad = -bordered.fullPivLu().determinant();  // b^T adj(M) b
  return {p.c * det + 0.5 * quad, det};
}

RationalDispersion params_to_rational(const GaussianParams& p, double u_max) {
  validate_shape(p);
  if (!(u_max > 0.0)) throw Error(ErrorKind::DomainError, "u_max must be positive");
  const Index d = p.D();
  const Index n = 2 * d + 2;

  VectorXd nodes(n);
  for (Index j = 0; j < n; ++j) {
    nodes[j] = u_max * std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n));
  }
  VectorXc num_samples(n), den_samples(n);
  for (Index j = 0; j < n; ++j) {
    const AdjugateSample s = adjugate_sample(p, nodes[j]);
    num_samples[j] = s.numerator;
    den_samples[j] = s.determinant;
  }
  if (den_samples.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::DegenerateDenominator, "det(A + Z u) vanishes identically");
  }

  // Fit in t = u / u_max so the Vandermonde matrix stays well conditioned.
  const VectorXd t = nodes / u_max;
  auto num_fit = poly::fit<Complex>(t, num_samples, d + 1);
  auto den_fit = poly::fit<Complex>(t, den_samples, d);

  for (const auto* f : {&num_fit.condition, &den_fit.condition}) {
    if (*f > kConditionLimit) {
      throw Error(ErrorKind::InterpolationError, "interpolation matrix is ill-conditioned");
    }
  }
  if (num_fit.relative_residual > 1e-8 || den_fit.relative_residual > 1e-8) {
    throw Error(ErrorKind::InterpolationError, "samples are not polynomial of the expected degree");
  }

  VectorXc num = poly::trim(num_fit.coeffs, kCancelTol);
  VectorXc den = poly::trim(den_fit.coeffs, kCancelTol);
  if (poly::max_abs(den) == 0.0) {
    throw Error(ErrorKind::DegenerateDenominator, "det(A + Z u) vanishes identically");
  }
  poly::strip_common_u_power(num, den, kCancelTol);
  const VectorXc g = poly::gcd(num, den, kCancelTol);
  if (g.size() > 1) {
    num = poly::trim(VectorXc(poly::divmod(num, g).first), kCancelTol);
    den = poly::trim(VectorXc(poly::divmod(den, g).first), kCancelTol);
  }
  // Back from t to u.
  for (VectorXc* c : {&num, &den}) {
    double s = 1.0;
    for (Index j = 0; j < c->size(); ++j, s /= u_max) (*c)[j] *= s;
  }
  return make_rational(num, den, u_max);
}

GaussianParams derive_cf_params(double m, int depth) {
  if (!(m > 0.0)) throw Error(ErrorKind::DomainError, "mass must be positive");
  if (depth < 1) throw Error(ErrorKind::DomainError, "depth must be >= 1");
  const Index d = depth;
  GaussianParams p;
  p.A = MatrixXc::Zero(d, d);
  p.Z = MatrixXc::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    // 0-based even index i is the 1-based odd level alpha = i + 1.
    if (i % 2 == 0) {
      p.Z(i, i) = 2.0 * m;
    } else {
      p.A(i, i) = 2.0 * m;
    }
    if (i + 1 < d) {
      p.Z(i, i + 1) = Complex(0.0, 1.0);
      p.Z(i + 1, i) = Complex(0.0, 1.0);
    }
  }
  p.a = VectorXc::Zero(d);
  p.z = VectorXc::Zero(d);
  p.z[0] = std::numbers::sqrt2;
  p.c = m;
  p.m = m;
  return p;
}

PolynomialPair parent_hamiltonian_split(const RationalDispersion& r) {
  if (!r.physical) throw Error(ErrorKind::NonPhysical, "dispersion is not flagged physical");
  VectorXd num = r.num.real();
  VectorXd den = r.den.real();
  num = poly::trim(num, kCancelTol);
  den = poly::trim(den, kCancelTol);
  poly::strip_common_u_power(num, den, kCancelTol);
  const VectorXd g = poly::gcd(num, den, kCancelTol);
  if (g.size() > 1) {
    num = poly::trim(VectorXd(poly::divmod(num, g).first), kCancelTol);
    den = poly::trim(VectorXd(poly::divmod(den, g).first), kCancelTol);
  }
  PolynomialPair out;
  out.a_poly = poly::multiply(den, den);
  out.b_poly = poly::multiply(num, num);
  const double lead = out.a_poly[out.a_poly.size() - 1];
  out.a_poly /= lead;
  out.b_poly /= lead;
  return out;
}

}  // namespace cpeps
