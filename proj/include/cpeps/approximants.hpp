#pragma once

// Reference dispersions for the free relativistic vacuum and their rational
// approximants (continued-fraction truncations, diagonal Pade).

#include "cpeps/gaussian_core.hpp"

namespace cpeps {

struct FreeDispersion {
  double m = 0.0;

  double operator()(double u) const;
};

// sqrt(m^2 + u)
double omega_free(double m, double u);

// m + u/(2m + u/(2m + ...)) with `depth` division levels, innermost 2m.
double cf_truncate(double m, int depth, double u);

// Taylor coefficients of sqrt(m^2 + u) about u0, orders 0..order.
VectorXd sqrt_taylor(double m, double u0, int order);

struct PadeCoefficients {
  VectorXd num;  // in powers of (u - u0)
  VectorXd den;  // q_0 = 1
  int achieved_degree = 0;
};

// [D/D] Pade approximant from Taylor coefficients c_0..c_{2D}. A singular
// linear system lowers the degree until it is solvable.
PadeCoefficients pade_from_taylor(const VectorXd& taylor, int degree);

// [D/D] Pade approximant of sqrt(m^2 + u) about u0, re-expanded in u with
// q_0 = 1. `domain_max` is the declared evaluation domain used to certify
// physicality.
RationalDispersion pade_sqrt(double m, double u0, int degree, double domain_max = 1.0);

// max over 4096 uniform points k in [0, Lambda] of |R(k^2) - omega_free(k^2)|.
double sup_error(const RationalDispersion& r, double m, double lambda);

}  // namespace cpeps
