#pragma once

// Gaussian sector of the CTNS <-> cPEPS correspondence.
//
// A Gaussian CTNS with D virtual fields reads
//
//   |CTNS> = int Dv exp(-int [ 1/2 grad v^T K grad v + V[v] - f[v] Psi^dag ]) |0>
//   V[v]   = 1/2 v^T V v + 1/2 (lap v)^T C (lap v)
//   f[v]   = f^T v - g^T lap v
//
// Projecting onto field eigenstates (<phi|0> ~ exp(-phi^2/2)) adds
// 1/2 f^2 - sqrt(2) f phi + 1/2 phi^2. In momentum space (u = k^2) this is a
// cPEPS exactly when C = -g g^T, with
//
//   Z = K + f g^T + g f^T,  A = V + f f^T,  z = sqrt(2) g,  a = sqrt(2) f,  c = 1.
//
// The physical field is measured in units where its on-site Gaussian has unit
// width. `scale` records the factor that maps back to a cPEPS with c != 1
// (phi -> sqrt(c) phi); it is 1 for a CTNS proper.

#include "cpeps/gaussian_core.hpp"

namespace cpeps {

struct CTNSGaussianData {
  MatrixXc V_quad;     // ultra-local potential
  MatrixXc kinetic;    // grad v grad v block
  MatrixXc curvature;  // lap v lap v block (must equal -g g^T to map to a cPEPS)
  VectorXc f_lin;      // source coupling
  VectorXc f_grad;     // source coupling to -lap v
  double scale = 1.0;

  Index D() const { return V_quad.rows(); }
};

// Zero-gradient data (C = 0, g = 0, scale = 1).
CTNSGaussianData make_local_ctns(MatrixXc v_quad, MatrixXc kinetic, VectorXc f_lin);

GaussianParams ctns_to_cpeps_kernel(const CTNSGaussianData& data);

// Throws NonPositiveC for c <= 0.
CTNSGaussianData cpeps_to_ctns(const GaussianParams& p);

// Largest entrywise difference across all blocks; infinity on shape mismatch.
double max_abs_difference(const CTNSGaussianData& x, const CTNSGaussianData& y);
double max_abs_difference(const GaussianParams& x, const GaussianParams& y);

}  // namespace cpeps
