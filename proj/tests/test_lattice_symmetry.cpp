#include <cmath>
#include <numbers>
#include <random>

#include "cpeps/approximants.hpp"
#include "cpeps/ctns_bridge.hpp"
#include "cpeps/fidelity.hpp"
#include "cpeps/lattice_symmetry.hpp"
#include "doctest.h"
#include "random_params.hpp"

using namespace cpeps;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

LatticeModel cf_model(int d, double eps, double dim_chi) {
  LatticeModel m;
  m.d = d;
  m.epsilon = eps;
  m.N_per_dim = 16;
  m.dim_chi = dim_chi;
  m.bare = bare_from_continuum(derive_cf_params(1.0, 2), eps, d, dim_chi);
  return m;
}

}  // namespace

TEST_CASE("lattice symbol") {
  CHECK(lattice_symbol(VectorXd::Zero(3), 0.1) == 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    VectorXd k(2);
    k << uni(rng), uni(rng);
    const double eps = 0.05;
    const double series = k.squaredNorm() - eps * eps * (std::pow(k[0], 4) + std::pow(k[1], 4)) / 12.0;
    CHECK(lattice_symbol(k, eps) >= 0.0);
    CHECK(std::abs(lattice_symbol(k, eps) - series) < 1e-6 * std::pow(k.norm(), 6) + 1e-14);
  }
  // Zone edge: 4 / eps^2 per axis.
  VectorXd edge(2);
  edge << pi / 0.2, pi / 0.2;
  CHECK(lattice_symbol(edge, 0.2) == Approx(2.0 * 4.0 / 0.04).epsilon(1e-14));
}

TEST_CASE("lattice dispersion") {
  const LatticeModel m = cf_model(1, 0.1, 0.0);
  CHECK(lattice_dispersion(m, VectorXd::Zero(1)) == Complex(1.0, 0.0));
  // Zone edge stays finite.
  const Complex edge = lattice_dispersion(m, VectorXd::Constant(1, grid_momentum(m, -8)));
  CHECK(std::isfinite(edge.real()));
  CHECK(edge.real() == Approx(cf_truncate(1.0, 2, 4.0 / 0.01)).epsilon(1e-12));
  CHECK(grid_momentum(m, -8) == Approx(-pi / 0.1));
}

TEST_CASE("continuum limit is second order") {
  for (int d = 1; d <= 3; ++d) {
    for (double k : {0.5, 1.0, 2.0}) {
      const auto rows = convergence_study(derive_cf_params(1.0, 2), d, default_dim_chi(d), {0.2, 0.1, 0.05}, k);
      for (double r : richardson_ratios(rows)) {
        CHECK(r >= 3.3);
        CHECK(r <= 4.7);
      }
      CHECK(rows[0].omega_cont == Approx(cf_truncate(1.0, 2, k * k)));
    }
  }
}

TEST_CASE("coupling renormalisation") {
  const GaussianParams bare = derive_cf_params(1.0, 2);
  const GaussianParams same = renormalize_couplings(bare, 1.0, 2, 0.7);
  CHECK(max_abs_difference(same, bare) == 0.0);

  const GaussianParams z1 = renormalize_couplings(bare, 0.25, 1, 0.0);
  CHECK((z1.Z - 0.25 * bare.Z).cwiseAbs().maxCoeff() < 1e-15);

  const GaussianParams round = bare_from_continuum(renormalize_couplings(bare, 0.3, 3, 1.0), 0.3, 3, 1.0);
  CHECK(max_abs_difference(round, bare) < 1e-14);
}

TEST_CASE("virtual field dimension drops out of the dispersion") {
  std::mt19937_64 rng(9);
  const GaussianParams bare = testing::random_admissible_params(rng, 3);
  for (int d = 1; d <= 3; ++d) {
    LatticeModel a;
    a.d = d;
    a.epsilon = 0.15;
    a.N_per_dim = 8;
    a.bare = bare;
    a.dim_chi = default_dim_chi(d);
    LatticeModel b = a;
    b.dim_chi = a.dim_chi + 0.8;
    for (int n = 0; n < 5; ++n) {
      VectorXd k = VectorXd::Constant(d, grid_momentum(a, n - 2));
      const Complex wa = lattice_dispersion(a, k), wb = lattice_dispersion(b, k);
      CHECK(std::abs(wa - wb) <= 1e-12 * std::abs(wa));
    }
  }
}

TEST_CASE("lattice mode sum approaches the continuum density") {
  const GaussianParams cont = derive_cf_params(1.0, 2);
  const double lambda = 3.0;
  const double exact = log_fidelity_density(params_to_rational(cont, lambda * lambda), 1.0, 1, lambda).value;
  double prev = INFINITY;
  for (double eps : {0.2, 0.1, 0.05}) {
    LatticeModel m;
    m.d = 1;
    m.epsilon = eps;
    m.N_per_dim = static_cast<int>(std::lround(200.0 / eps));  // N eps = 200
    m.dim_chi = 0.0;
    m.bare = bare_from_continuum(cont, eps, 1, 0.0);
    const double err = std::abs(lattice_log_fidelity_density(m, 1.0, lambda) - exact);
    CHECK(err * 3.0 < prev);  // second order in eps
    prev = err;
  }
  CHECK(prev < 5e-3 * std::abs(exact));
}

TEST_CASE("rotation invariance") {
  const QuadraticKernel k2 = isotropic_site_kernel(derive_cf_params(1.0, 2), 2);
  CHECK(rotation_invariance_check(k2, 2));
  std::mt19937_64 rng(4);
  const QuadraticKernel k3 = isotropic_site_kernel(testing::random_admissible_params(rng, 2), 3);
  CHECK(rotation_invariance_check(k3, 3));

  QuadraticKernel broken = k3;
  const Index D = broken.bond;
  for (Index s : {Index(0), 3 * D})
    for (Index t : {Index(0), 3 * D}) broken.form.block(s, t, D, D) *= 1.1;
  CHECK_FALSE(rotation_invariance_check(broken, 3));

  CHECK_THROWS_AS(rotation_invariance_check(k2, 3), Error);
  CHECK_THROWS_AS(rotation_invariance_check(isotropic_site_kernel(derive_cf_params(1.0, 1), 1), 1), Error);
}

TEST_CASE("four quarter turns are the identity") {
  std::mt19937_64 rng(6);
  QuadraticKernel k = isotropic_site_kernel(testing::random_admissible_params(rng, 2), 3);
  k.form = testing::random_symmetric(rng, k.form.rows(), 1.0);  // arbitrary, not invariant
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const MatrixXd r = rotation_map(k, i, j);
      const MatrixXd r4 = r * r * r * r;
      CHECK(r4 == MatrixXd::Identity(r.rows(), r.cols()));
      QuadraticKernel turned = k;
      for (int n = 0; n < 4; ++n) turned = rotate(turned, i, j);
      CHECK(turned.form == k.form);
    }
  }
}

TEST_CASE("U(1) symmetry") {
  std::mt19937_64 rng(12);
  const QuadraticKernel k = testing::charge_conserving_kernel(rng, 4, 1);
  const GroupRepresentation u1 = u1_representation(1, 4);
  CHECK(u1.elements.size() == 6);
  CHECK(global_symmetry_check(k, u1));
  QuadraticKernel charged = k;
  charged.form(4, 4) += 0.5;  // phi phi
  CHECK_FALSE(global_symmetry_check(charged, u1));

  CHECK_THROWS_AS(global_symmetry_check(k, u1_representation(2, 4)), Error);
  GroupRepresentation bad = u1;
  bad.elements[0].physical *= 1.1;
  CHECK_THROWS_WITH_AS(global_symmetry_check(k, bad), doctest::Contains("NonUnitaryRep"), Error);
}

TEST_CASE("O(2) doublets") {
  // Real fields: virtual doublet (v1, v2), physical doublet (phi1, phi2).
  QuadraticKernel k;
  k.virtual_dim = 2;
  k.physical_dim = 2;
  k.form = MatrixXc::Zero(4, 4);
  k.form.topLeftCorner(2, 2) = 1.7 * MatrixXc::Identity(2, 2);
  k.form.bottomRightCorner(2, 2) = 0.9 * MatrixXc::Identity(2, 2);
  k.form.topRightCorner(2, 2) = -0.4 * MatrixXc::Identity(2, 2);
  k.form.bottomLeftCorner(2, 2) = -0.4 * MatrixXc::Identity(2, 2);
  // v x phi = v1 phi2 - v2 phi1 is also invariant under SO(2).
  k.form(0, 3) = k.form(3, 0) = 0.3;
  k.form(1, 2) = k.form(2, 1) = -0.3;
  const GroupRepresentation o2 = o2_representation(2, 2);
  CHECK(global_symmetry_check(k, o2));
  QuadraticKernel aniso = k;
  aniso.form(0, 0) += 0.2;
  CHECK_FALSE(global_symmetry_check(aniso, o2));
}

TEST_CASE("convergence csv") {
  const auto rows = convergence_study(derive_cf_params(1.0, 1), 1, 0.0, {0.1}, 1.0);
  const std::string csv = convergence_csv(rows);
  CHECK(csv.rfind("epsilon,k,omega_lat,omega_cont,abs_err\n0.10000000000000001,1,", 0) == 0);
}

TEST_CASE("model validation") {
  LatticeModel m = cf_model(1, 0.1, 0.0);
  m.N_per_dim = 7;
  CHECK_THROWS_AS(validate_model(m), Error);
  m.N_per_dim = 8;
  m.epsilon = 0.0;
  CHECK_THROWS_AS(validate_model(m), Error);
}
