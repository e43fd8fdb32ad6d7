#pragma once

// Gaussian cPEPS parameter sets and the dispersion they induce after the
// virtual fields are integrated out:
//
//   omega_D(u) = c + 1/2 (a + z u)^T (A + Z u)^{-1} (a + z u),   u = k^2.
//
// Two independent evaluation routes are provided: a direct linear solve
// (eval_dispersion_schur / eliminate_chain) and a rational function whose
// coefficients come from determinants sampled at interpolation nodes
// (params_to_rational + rational_eval). The bilinear forms are transposes,
// not adjoints: Z and A are complex symmetric.

#include <vector>

#include "cpeps/common.hpp"

namespace cpeps {

struct GaussianParams {
  MatrixXc Z;  // 1/mass
  MatrixXc A;  // mass
  VectorXc z;  // 1/mass
  VectorXc a;  // mass
  double c = 1.0;
  double m = 0.0;  // mass scale the set was built for; 0 when unspecified

  Index D() const { return A.rows(); }
};

// Throws ShapeMismatch unless Z, A are DxD and z, a have length D (D >= 1).
void validate_shape(const GaussianParams& p);

// Gaussian convergence condition: c > 0, Z and A symmetric, and
// Re(A + Z u) positive definite on `samples` points of (0, u_max].
bool is_admissible(const GaussianParams& p, double u_max, int samples = 64);

struct RationalDispersion {
  VectorXc num;  // p_0 .. p_n in u
  VectorXc den;  // q_0 = 1, q_1 .. q_D
  double base_point = 0.0;
  // Upper end of the declared evaluation domain [0, domain_max] in u.
  double domain_max = 1.0;
  // Real and positive on the declared domain (see certify_physical).
  bool physical = false;

  Index degree() const { return std::max(num.size(), den.size()) - 1; }
};

// Normalises q_0 = 1 and sets `physical` by sampling the domain.
// Throws DegenerateDenominator when den(0) vanishes.
RationalDispersion make_rational(VectorXc num, VectorXc den, double domain_max = 1.0,
                                 double base_point = 0.0);

// 256-point check that num/den is real (|Im| < 1e-9 |Re|) and positive on
// [0, u_max].
bool certify_physical(const RationalDispersion& r, double u_max);

Complex rational_eval(const RationalDispersion& r, double u);

struct EliminationStep {
  Index alpha;  // 1-based index of the eliminated virtual field
  Complex effective_diagonal;
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;
  Complex final_omega;
};

struct PolynomialPair {
  VectorXd a_poly;
  VectorXd b_poly;
};

Complex eval_dispersion_schur(const GaussianParams& p, double u);

// Scalar Schur elimination of a chain (tridiagonal A + Z u), from the last
// virtual field down to the first.
EliminationTrace eliminate_chain(const GaussianParams& p, double u);

// det(A + Z u) and the numerator c det(M) + 1/2 b^T adj(M) b, the latter via
// the bordered determinant det([[M, b], [b^T, 0]]) = -b^T adj(M) b.
struct AdjugateSample {
  Complex numerator;
  Complex determinant;
};
AdjugateSample adjugate_sample(const GaussianParams& p, Complex u);

// Exact rational form of omega_D. Determinants are sampled on 2D+2 Chebyshev
// nodes of [-u_max, u_max] and fitted; common factors are cancelled and
// q_0 is normalised to 1. The numerator has degree D+1 when z^T adj(Z) z != 0.
RationalDispersion params_to_rational(const GaussianParams& p, double u_max = 1.0);

// Chain parameters whose dispersion is the depth-D continued fraction
//   m + u/(2m + u/(2m + ... + u/(2m)))
// identically in u. Diagonal of A + Z u alternates 2m u (odd alpha) and 2m
// (even alpha); a = 0, z = sqrt(2) e_1, c = m. The recursion
// G_alpha = M_aa - M_{a,a+1}^2 / G_{alpha+1} then fixes the off-diagonal to
// M_{a,a+1} = i u, i.e. Z_{a,a+1} = i.
GaussianParams derive_cf_params(double m, int depth);

// Local parent-Hamiltonian polynomials with b/a = omega^2: a = den^2,
// b = num^2 after cancelling common factors (tolerance 1e-10), scaled so
// that a is monic.
PolynomialPair parent_hamiltonian_split(const RationalDispersion& r);

}  // namespace cpeps
