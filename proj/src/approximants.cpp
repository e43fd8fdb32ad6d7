#include "cpeps/approximants.hpp"

#include <cmath>

#include "cpeps/polynomial.hpp"

namespace cpeps {

double FreeDispersion::operator()(double u) const { return omega_free(m, u); }

double omega_free(double m, double u) {
  if (m < 0.0 || u < 0.0) throw Error(ErrorKind::DomainError, "omega_free needs m, u >= 0");
  return std::sqrt(m * m + u);
}

double cf_truncate(double m, int depth, double u) {
  if (!(m > 0.0)) throw Error(ErrorKind::DomainError, "cf_truncate needs m > 0");
  if (depth < 1) return m;
  double tail = 2.0 * m;
  for (int level = 1; level < depth; ++level) tail = 2.0 * m + u / tail;
  return m + u / tail;
}

VectorXd sqrt_taylor(double m, double u0, int order) {
  if (!(m > 0.0) || u0 < 0.0) throw Error(ErrorKind::DomainError, "sqrt_taylor needs m > 0, u0 >= 0");
  // sqrt(s^2 + x) = s * sum_n binom(1/2, n) (x / s^2)^n
  const double s2 = m * m + u0;
  VectorXd c(order + 1);
  double binom = 1.0;
  double scale = std::sqrt(s2);
  for (int n = 0; n <= order; ++n) {
    c[n] = binom * scale;
    binom *= (0.5 - n) / (n + 1.0);
    scale /= s2;
  }
  return c;
}

PadeCoefficients pade_from_taylor(const VectorXd& taylor, int degree) {
  if (degree < 0 || taylor.size() < 2 * degree + 1) {
    throw Error(ErrorKind::ShapeMismatch, "need 2D+1 Taylor coefficients");
  }
  for (int deg = degree; deg >= 0; --deg) {
    VectorXd q = VectorXd::Zero(deg + 1);
    q[0] = 1.0;
    if (deg > 0) {
      // sum_{j=0}^{D} q_j c_{n-j} = 0 for n = D+1 .. 2D
      MatrixXd h(deg, deg);
      VectorXd rhs(deg);
      for (int row = 0; row < deg; ++row) {
        const int n = deg + 1 + row;
        for (int j = 1; j <= deg; ++j) h(row, j - 1) = taylor[n - j];
        rhs[row] = -taylor[n];
      }
      Eigen::PartialPivLU<MatrixXd> lu(h);
      if (!(lu.rcond() > 1e-14)) continue;
      q.tail(deg) = lu.solve(rhs);
    }
    VectorXd p = VectorXd::Zero(deg + 1);
    for (int n = 0; n <= deg; ++n)
      for (int j = 0; j <= n; ++j) p[n] += q[j] * taylor[n - j];
    return {p, q, deg};
  }
  throw Error(ErrorKind::PadeDegenerate, "no solvable Pade system");
}

namespace {

// Coefficients of p(u - u0) in powers of u.
VectorXd shift_origin(const VectorXd& p, double u0) {
  VectorXd out = VectorXd::Zero(p.size());
  for (Index n = 0; n < p.size(); ++n) {
    double binom = 1.0;  // C(n, k)
    for (Index k = 0; k <= n; ++k) {
      out[k] += p[n] * binom * std::pow(-u0, static_cast<double>(n - k));
      binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
  }
  return out;
}

}  // namespace

RationalDispersion pade_sqrt(double m, double u0, int degree, double domain_max) {
  if (!(m > 0.0)) throw Error(ErrorKind::DomainError, "pade_sqrt needs m > 0");
  if (u0 < 0.0 || degree < 0) throw Error(ErrorKind::DomainError, "pade_sqrt needs u0 >= 0, D >= 0");
  const PadeCoefficients pc = pade_from_taylor(sqrt_taylor(m, u0, 2 * degree), degree);
  const VectorXc num = shift_origin(pc.num, u0).cast<Complex>();
  const VectorXc den = shift_origin(pc.den, u0).cast<Complex>();
  return make_rational(num, den, domain_max, u0);
}

double sup_error(const RationalDispersion& r, double m, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::DomainError, "Lambda must be positive");
  constexpr int kPoints = 4096;
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double k = lambda * i / (kPoints - 1);
    const double u = k * k;
    worst = std::max(worst, std::abs(rational_eval(r, u) - omega_free(m, u)));
  }
  return worst;
}

}  // namespace cpeps
