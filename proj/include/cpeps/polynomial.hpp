#pragma once

// Dense univariate polynomials stored as ascending coefficient vectors
// (index i multiplies u^i). Scalar is double or std::complex<double>.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace cpeps::poly {

template <typename Scalar>
using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar, typename X>
auto horner(const Coeffs<Scalar>& p, X x) {
  using R = decltype(Scalar{} * x);
  R acc{0};
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) acc = acc * x + p[i];
  return acc;
}

template <typename Scalar>
double max_abs(const Coeffs<Scalar>& p) {
  return p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff();
}

template <typename Scalar>
Eigen::Index degree(const Coeffs<Scalar>& p) {
  return p.size() - 1;
}

// Drops high-order coefficients whose magnitude is below rel_tol * max|p|.
// Always keeps at least the constant term.
template <typename Scalar>
Coeffs<Scalar> trim(const Coeffs<Scalar>& p, double rel_tol) {
  if (p.size() == 0) return Coeffs<Scalar>::Zero(1);
  const double cut = rel_tol * max_abs(p);
  Eigen::Index n = p.size();
  while (n > 1 && std::abs(p[n - 1]) <= cut) --n;
  return p.head(n);
}

template <typename Scalar>
Coeffs<Scalar> multiply(const Coeffs<Scalar>& p, const Coeffs<Scalar>& q) {
  Coeffs<Scalar> r = Coeffs<Scalar>::Zero(p.size() + q.size() - 1);
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

// Long division p = quot * q + rem with deg(rem) < deg(q). q must have a
// nonzero leading coefficient.
template <typename Scalar>
std::pair<Coeffs<Scalar>, Coeffs<Scalar>> divmod(const Coeffs<Scalar>& p, const Coeffs<Scalar>& q) {
  const Eigen::Index dq = q.size() - 1;
  const Eigen::Index dp = p.size() - 1;
  if (dp < dq) return {Coeffs<Scalar>::Zero(1), p};
  Coeffs<Scalar> rem = p;
  Coeffs<Scalar> quot = Coeffs<Scalar>::Zero(dp - dq + 1);
  const Scalar lead = q[dq];
  for (Eigen::Index k = dp - dq; k >= 0; --k) {
    const Scalar t = rem[k + dq] / lead;
    quot[k] = t;
    for (Eigen::Index j = 0; j <= dq; ++j) rem[k + j] -= t * q[j];
  }
  Coeffs<Scalar> r = dq > 0 ? Coeffs<Scalar>(rem.head(dq)) : Coeffs<Scalar>::Zero(1);
  return {quot, r};
}

// Greatest common divisor by the Euclidean algorithm on max-normalised
// operands. A remainder whose coefficients all fall below tol is treated as
// zero. Result is monic; a constant result means "coprime".
template <typename Scalar>
Coeffs<Scalar> gcd(Coeffs<Scalar> a, Coeffs<Scalar> b, double tol) {
  auto normalise = [tol](Coeffs<Scalar> p) {
    const double s = max_abs(p);
    if (s > 0) p /= s;
    return trim(p, tol);
  };
  a = normalise(a);
  b = normalise(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (b.size() > 1) {
    Coeffs<Scalar> r = divmod(a, b).second;
    if (max_abs(r) <= tol) {
      return b / b[b.size() - 1];
    }
    a = b;
    b = normalise(r);
  }
  if (max_abs(b) <= tol) return a / a[a.size() - 1];
  return Coeffs<Scalar>::Ones(1);
}

// Removes the largest power u^k that divides both p and q (low-order
// coefficients below tol * max|.| in both count as zero). Returns k.
template <typename Scalar>
int strip_common_u_power(Coeffs<Scalar>& p, Coeffs<Scalar>& q, double tol) {
  const double cp = tol * max_abs(p);
  const double cq = tol * max_abs(q);
  int k = 0;
  while (p.size() > 1 && q.size() > 1 && std::abs(p[0]) <= cp && std::abs(q[0]) <= cq) {
    p = Coeffs<Scalar>(p.tail(p.size() - 1));
    q = Coeffs<Scalar>(q.tail(q.size() - 1));
    ++k;
  }
  return k;
}

template <typename Scalar>
struct FitResult {
  Coeffs<Scalar> coeffs;
  double relative_residual = 0.0;
  double condition = 1.0;
};

// Least-squares fit of a degree-`deg` polynomial to samples (nodes, values).
template <typename Scalar>
FitResult<Scalar> fit(const Eigen::VectorXd& nodes, const Coeffs<Scalar>& values, Eigen::Index deg) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = nodes.size();
  Mat vander(n, deg + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar x{1};
    for (Eigen::Index j = 0; j <= deg; ++j) {
      vander(i, j) = x;
      x *= nodes[i];
    }
  }
  FitResult<Scalar> out;
  Eigen::JacobiSVD<Mat> svd(vander, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  out.coeffs = vander.colPivHouseholderQr().solve(values);
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  out.relative_residual = (vander * out.coeffs - values).cwiseAbs().maxCoeff() / scale;
  return out;
}

}  // namespace cpeps::poly
