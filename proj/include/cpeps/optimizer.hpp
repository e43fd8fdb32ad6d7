#pragma once

// Variational maximisation of the universal per-site log fidelity over
// dimensionless rational dispersions
//
//   omega~(kbar) = (p~_0 + p~_1 ubar + ... + p~_D ubar^D) / (1 + q~_1 ubar + ... + q~_D ubar^D),
//
// ubar = kbar^2, by Nelder-Mead on the negated objective with a quadratic
// positivity penalty.

#include <cstdint>
#include <string>
#include <vector>

#include "cpeps/fidelity.hpp"

namespace cpeps {

struct RationalCoeffs {
  VectorXd num;  // p~_0 .. p~_D
  VectorXd den;  // 1, q~_1 .. q~_D

  Index bond_dimension() const { return num.size() - 1; }
  double omega(double ubar) const;
  double denominator(double ubar) const;
};

struct OptimizationProblem {
  int d = 1;
  int D = 1;
};

struct OptimizerConfig {
  int max_iter = 2000;
  double tol = 1e-8;
  int restarts = 1;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct OptimizationResult {
  RationalCoeffs best_coeffs;
  double best_value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  // min over the check grid of min(omega~, den); small values mean the
  // optimum sits near the edge of the feasible set.
  double boundary_margin = 0.0;
  std::vector<double> trace;  // best objective after each iteration of the winning run
};

// Shape-checked coefficients of bond dimension D (num and den both D+1 long,
// den[0] = 1).
RationalCoeffs make_coeffs(VectorXd num, VectorXd den);

// Pads/normalises a rescaled dispersion into bond dimension D. Throws
// ShapeMismatch if its degree exceeds D or it has a complex coefficient.
RationalCoeffs to_coeffs(const RescaledDispersion& rt, int D);

// Denominator and omega~ positive on kbar_j = j/256, j = 1..256.
bool is_admissible(const RationalCoeffs& coeffs, int d);

// Universal per-site log fidelity of the coefficients (quadrature at 1e-9).
double universal_objective(const RationalCoeffs& coeffs, int d);

// Baseline starting points: the dimensionless coefficients at cutoff Lambda
// of the [D/D] Pade about u0 = 0 and of the continued fraction of depth
// `cf_depth`, for the free mass m.
RationalCoeffs pade_start(int D, double m = 1.0, double lambda = 10.0);
RationalCoeffs cf_start(int D, int cf_depth, double m = 1.0, double lambda = 10.0);

// Throws InfeasibleStart if init is not admissible, ObjectiveFailure when
// quadrature fails.
OptimizationResult optimize_universal_per_site(const OptimizationProblem& problem, const RationalCoeffs& init,
                                               const OptimizerConfig& config);

// `d,D,seed,iterations,evaluations,converged,best_value,boundary_margin,num,den`
// with num/den as space-separated coefficient lists.
std::string optimization_csv_header();
std::string to_csv_row(const OptimizationProblem& problem, const OptimizationResult& result);
// `iteration,best_value`
std::string trace_csv(const OptimizationResult& result);

}  // namespace cpeps
