#pragma once

// Lattice field-PEPS in momentum space and the symmetry checks on its site
// kernel.
//
// On a periodic lattice of spacing epsilon the link states identify
// eta_i(x) with chi_i(x - epsilon e_i), so eliminating the virtual fields
// mode by mode reproduces the continuum dispersion with k^2 replaced by
//
//   lambda(k) = sum_i (2 - 2 cos(k_i epsilon)) / epsilon^2 = k^2 - epsilon^2 sum_i k_i^4 / 12 + ...
//
// Bare (dimensionless) couplings are turned into continuum ones by powers of
// epsilon fixed by the mass dimensions [phi] = (d-1)/2 and [chi]:
//
//   Z = eps^(2-d+2[chi]) Z0     A = eps^(-d+2[chi]) A0
//   z = eps^(2-d+[chi]+[phi]) z0  a = eps^(-d+[chi]+[phi]) a0
//   c = eps^(-d+2[phi]) c0

#include <string>
#include <vector>

#include "cpeps/gaussian_core.hpp"

namespace cpeps {

struct LatticeModel {
  int d = 1;
  double epsilon = 0.1;
  int N_per_dim = 64;  // even
  GaussianParams bare;
  double dim_chi = 0.0;  // [chi]; see default_dim_chi

  double linear_size() const { return N_per_dim * epsilon; }
};

// [phi] = (d-1)/2, also the default for [chi].
double dim_phi(int d);
double default_dim_chi(int d);

// Throws DomainError unless d in 1..3, epsilon > 0 and N even and positive.
void validate_model(const LatticeModel& model);

// k_i = 2 pi n_i / (N epsilon), n_i in {-N/2 .. N/2-1}.
double grid_momentum(const LatticeModel& model, int n);

double lattice_symbol(const VectorXd& k, double epsilon);

GaussianParams renormalize_couplings(const GaussianParams& bare, double epsilon, int d, double dim_chi);
// Inverse of renormalize_couplings.
GaussianParams bare_from_continuum(const GaussianParams& continuum, double epsilon, int d, double dim_chi);

// omega_lat(k). `k` should lie on the model grid; off-grid momenta are
// evaluated with the same formula.
Complex lattice_dispersion(const LatticeModel& model, const VectorXd& k);

// (N epsilon)^-d sum over grid modes with |k| <= lambda of
// mode_log_overlap(omega_lat, omega_free); tends to log_fidelity_density as
// epsilon -> 0 at fixed N epsilon.
double lattice_log_fidelity_density(const LatticeModel& model, double m, double lambda);

struct ConvergenceRow {
  double epsilon;
  double k;
  double omega_lat;
  double omega_cont;
  double abs_err;
};

// One row per epsilon for a 1-d momentum k (along the first axis), holding the
// continuum couplings fixed: bare = bare_from_continuum(continuum, epsilon).
std::vector<ConvergenceRow> convergence_study(const GaussianParams& continuum, int d, double dim_chi,
                                              const std::vector<double>& epsilons, double k);
// err(eps_i) / err(eps_{i+1}) for consecutive rows.
std::vector<double> richardson_ratios(const std::vector<ConvergenceRow>& rows);
// `epsilon,k,omega_lat,omega_cont,abs_err`
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

// Quadratic exponent 1/2 w^T form w of one site. Real fields: w = (v, phi);
// complex fields: w = (v, phi, conj v, conj phi). The virtual block of a
// PEPS site kernel is ordered chi_1..chi_d, eta_1..eta_d with `bond` fields
// per leg.
struct QuadraticKernel {
  MatrixXc form;
  Index virtual_dim = 0;
  Index physical_dim = 1;
  bool complex_fields = false;
  int d = 0;
  Index bond = 0;

  Index field_count() const { return virtual_dim + physical_dim; }
};

// Site kernel with identical couplings on every direction: for each leg pair
// the gradient difference chi_i - eta_i carries Z, the sum chi_i + eta_i
// carries A / 4, phi couples to the differences through a + z and to itself
// through c.
QuadraticKernel isotropic_site_kernel(const GaussianParams& p, int d);

// Signed permutation implementing the pi/2 rotation in the (i, j) plane:
// chi_i -> chi_j, chi_j -> -eta_i, eta_i -> eta_j, eta_j -> -chi_i.
MatrixXd rotation_map(const QuadraticKernel& kernel, int i, int j);
QuadraticKernel rotate(const QuadraticKernel& kernel, int i, int j);

// True iff the kernel is invariant (entrywise, 1e-12 relative to its largest
// entry) under the rotations of every coordinate plane. Throws ShapeMismatch
// for d < 2 or inconsistent block sizes.
bool rotation_invariance_check(const QuadraticKernel& kernel, int d);

struct GroupElement {
  MatrixXc physical;  // D^j(g)
  MatrixXc virtual_;  // D^J(g)
};

struct GroupRepresentation {
  std::vector<GroupElement> elements;
};

// Phases e^{i q theta} on every field, theta in {pi/7, 1, 2.5} and inverses.
GroupRepresentation u1_representation(Index physical_dim, Index virtual_dim, double physical_charge = 1.0,
                                      double virtual_charge = 1.0);
// Real doublets rotated by SO(2) at the same angles; dims must be even.
GroupRepresentation o2_representation(Index physical_dim, Index virtual_dim);

// T^T form T == form for every sampled g, with T = diag(D^J, D^j) (and the
// conjugate copy for complex fields). Throws ShapeMismatch or
// NonUnitaryRep (1e-12).
bool global_symmetry_check(const QuadraticKernel& kernel, const GroupRepresentation& rep);

}  // namespace cpeps
