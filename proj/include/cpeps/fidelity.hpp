#pragma once

// Fidelity between a Gaussian state with dispersion omega_D and the free
// vacuum omega_f = sqrt(m^2 + k^2) under a sharp momentum cutoff Lambda.
//
// Both states factorise over momentum modes, each mode contributing
// mode_log_overlap(omega_D(k), omega_f(k)) to log F. Conventions:
//
//   log_density = int_{|k|<=Lambda} d^dk/(2pi)^d  mode_log_overlap   (log F / volume)
//   per_site    = log_density / Lambda^d                              (log F / N, spacing 1/Lambda)
//   universal   = int_{|kbar|<=1} d^dkbar/(2pi)^d mode_log_overlap(omega~(kbar), kbar)
//   remainder   = per_site - universal
//
// where omega~(kbar) = omega(Lambda kbar)/Lambda. The universal term uses the
// rescaled coefficients at the given Lambda as the cutoff-independent part, so
// for a family whose rescaled coefficients do not move with Lambda the
// remainder only carries the m/Lambda dependence of omega~_f.

#include <functional>
#include <string>

#include "cpeps/gaussian_core.hpp"

namespace cpeps {

// A physical dispersion as a function of u = k^2 (or ubar = kbar^2).
using DispersionFn = std::function<double(double u)>;

// Wraps a rational dispersion; evaluation throws DomainError when the value
// is not real-positive (|Im| >= 1e-9 Re or Re <= 0).
DispersionFn as_function(const RationalDispersion& r);

// 1/2 log(2 sqrt(w1 w2) / (w1 + w2)), evaluated as
// 1/2 log1p(-(sqrt w1 - sqrt w2)^2 / (w1 + w2)) so that nearly equal modes
// keep full relative precision. Symmetric in its arguments.
double mode_log_overlap(double w1, double w2);

// Surface area of the unit sphere in d dimensions divided by (2 pi)^d.
double radial_measure(int d);

struct Integral {
  double value = 0.0;
  double error_estimate = 0.0;
};

Integral log_fidelity_density(const DispersionFn& omega, double m, int d, double lambda);
Integral log_fidelity_density(const RationalDispersion& r, double m, int d, double lambda);

// Sum of mode_log_overlap over the grid k_i = Lambda (2 n_i / N - 1),
// n_i = 0..N-1, restricted to |k| <= Lambda. The grid spacing is 2 Lambda / N,
// so the sum divided by N^d tends to (pi / Lambda)^d * log_fidelity_density,
// i.e. pi^d * per_site. In d = 1 the grid is symmetric up to the single -Lambda
// endpoint and the sum is a trapezoid rule (O(1/N^2) convergence).
double finite_lattice_log_fidelity(const DispersionFn& omega, double m, int d, double lambda, int n_per_dim);
double finite_lattice_log_fidelity(const RationalDispersion& r, double m, int d, double lambda, int n_per_dim);

struct RescaledDispersion {
  VectorXc tilde_num;  // p~_a = Lambda^(2a-1) p_a
  VectorXc tilde_den;  // q~_a = Lambda^(2a) q_a
  double lambda_used = 1.0;

  // omega~ at ubar = kbar^2
  Complex operator()(double ubar) const;
};

RescaledDispersion rescale_to_unit_cutoff(const RationalDispersion& r, double lambda);

// Inverse of rescale_to_unit_cutoff for an arbitrary target cutoff: the
// physical dispersion whose rescaled coefficients at `lambda` are rt's.
RationalDispersion from_unit_cutoff(const RescaledDispersion& rt, double lambda, double domain_max);

// Radial integral over the unit ball with kbar = t^2 so the logarithmic
// endpoint behaviour at kbar -> 0 becomes integrable with smooth weight.
Integral universal_per_site(const RescaledDispersion& rt, int d);
Integral universal_per_site(const DispersionFn& omega_tilde, int d);

double irrelevant_remainder(const RationalDispersion& r, double m, int d, double lambda);

struct FidelityReport {
  int d = 1;
  double lambda = 1.0;
  double m = 0.0;
  Index bond_dimension = 0;
  double log_density = 0.0;
  double per_site = 0.0;
  double universal = 0.0;
  double remainder = 0.0;
  double quadrature_error_estimate = 0.0;
};

FidelityReport fidelity_report(const RationalDispersion& r, double m, int d, double lambda);
// For dispersions without coefficients (e.g. the exact free vacuum).
FidelityReport fidelity_report(const DispersionFn& omega, Index bond_dimension, double m, int d, double lambda);

// `d,Lambda,m,D,log_density,per_site,universal,remainder,quad_err`
std::string fidelity_csv_header();
std::string to_csv_row(const FidelityReport& report);

}  // namespace cpeps
