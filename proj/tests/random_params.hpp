#pragma once

// Random fixtures shared by the unit tests and the acceptance runner.

#include <random>

#include "cpeps/ctns_bridge.hpp"
#include "cpeps/gaussian_core.hpp"
#include "cpeps/lattice_symmetry.hpp"

namespace cpeps::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline MatrixXc random_symmetric(std::mt19937_64& rng, Index n, double scale) {
  MatrixXc m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = Complex(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
  return m;
}

inline VectorXc random_vector(std::mt19937_64& rng, Index n, double scale) {
  VectorXc v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
  return v;
}

// Real part of A + Z u is positive definite for every u >= 0.
inline GaussianParams random_admissible_params(std::mt19937_64& rng, Index D) {
  auto positive = [&](double shift) {
    MatrixXd b(D, D);
    for (Index i = 0; i < D; ++i)
      for (Index j = 0; j < D; ++j) b(i, j) = uniform(rng, -1.0, 1.0);
    MatrixXc m = (b * b.transpose() + shift * MatrixXd::Identity(D, D)).cast<Complex>();
    const MatrixXc im = random_symmetric(rng, D, 0.3);
    m += Complex(0.0, 1.0) * im.real();
    return m;
  };
  GaussianParams p;
  p.A = positive(0.5);
  p.Z = positive(0.5);
  p.a = random_vector(rng, D, 1.0);
  p.z = random_vector(rng, D, 1.0);
  p.c = uniform(rng, 1.0, 3.0);
  return p;
}

inline CTNSGaussianData random_ctns(std::mt19937_64& rng, Index D) {
  CTNSGaussianData d;
  d.V_quad = random_symmetric(rng, D, 1.0);
  d.kinetic = random_symmetric(rng, D, 1.0);
  d.f_lin = random_vector(rng, D, 1.0);
  d.f_grad = random_vector(rng, D, 1.0);
  d.curvature = -d.f_grad * d.f_grad.transpose();
  d.scale = uniform(rng, 0.5, 2.0);
  return d;
}

// Positive coefficients keep num/den real and positive for u >= 0.
inline RationalDispersion random_physical_rational(std::mt19937_64& rng, Index D) {
  VectorXc num(D + 1), den(D + 1);
  for (Index i = 0; i <= D; ++i) {
    num[i] = uniform(rng, 0.2, 2.0);
    den[i] = i == 0 ? 1.0 : uniform(rng, 0.2, 2.0);
  }
  return make_rational(num, den, 4.0);
}

// Complex fields (v, phi, conj v, conj phi) paired only as unbarred-barred.
inline QuadraticKernel charge_conserving_kernel(std::mt19937_64& rng, Index virtual_dim, Index physical_dim) {
  QuadraticKernel k;
  k.virtual_dim = virtual_dim;
  k.physical_dim = physical_dim;
  k.complex_fields = true;
  const Index n = virtual_dim + physical_dim;
  MatrixXc h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  k.form = MatrixXc::Zero(2 * n, 2 * n);
  k.form.topRightCorner(n, n) = h;
  k.form.bottomLeftCorner(n, n) = h.transpose();
  return k;
}

}  // namespace cpeps::testing
