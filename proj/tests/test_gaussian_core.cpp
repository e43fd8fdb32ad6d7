#include <cmath>
#include <random>

#include "cpeps/approximants.hpp"
#include "cpeps/gaussian_core.hpp"
#include "cpeps/polynomial.hpp"
#include "doctest.h"
#include "random_params.hpp"

using namespace cpeps;
using doctest::Approx;

namespace {

GaussianParams single(Complex A, Complex Z, Complex a, Complex z, double c) {
  GaussianParams p;
  p.A = MatrixXc::Constant(1, 1, A);
  p.Z = MatrixXc::Constant(1, 1, Z);
  p.a = VectorXc::Constant(1, a);
  p.z = VectorXc::Constant(1, z);
  p.c = c;
  return p;
}

RationalDispersion four_three() {
  VectorXc num(2), den(2);
  num << 4.0, 3.0;
  den << 4.0, 1.0;
  return make_rational(num, den, 16.0);
}

template <class Fn>
ErrorKind kind_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("decoupled virtual field returns c") {
  const GaussianParams p = single(2.0, 0.5, 0.0, 0.0, 1.3);
  CHECK(eval_dispersion_schur(p, 7.0).real() == Approx(1.3).epsilon(1e-15));
  const EliminationTrace t = eliminate_chain(p, 7.0);
  CHECK(t.steps.size() == 1);
  CHECK(t.steps[0].alpha == 1);
  CHECK(t.final_omega.real() == Approx(1.3).epsilon(1e-15));
}

TEST_CASE("continued-fraction parameters reproduce hand values") {
  CHECK(eval_dispersion_schur(derive_cf_params(1.0, 1), 1.0).real() == Approx(1.5).epsilon(1e-14));
  CHECK(eval_dispersion_schur(derive_cf_params(1.0, 2), 1.0).real() == Approx(1.4).epsilon(1e-14));
  CHECK(eliminate_chain(derive_cf_params(1.0, 2), 1.0).final_omega.real() == Approx(1.4).epsilon(1e-14));
  const Complex tiny = eliminate_chain(derive_cf_params(1.0, 1), 1e-4).final_omega;
  CHECK(tiny.real() == Approx(1.0 + 5e-5).epsilon(1e-14));
  CHECK(std::abs(tiny.imag()) < 1e-15);
}

TEST_CASE("chain elimination matches backward recursion for both parities") {
  for (double m : {0.5, 1.0, 2.0}) {
    for (int depth = 1; depth <= 7; ++depth) {
      const GaussianParams p = derive_cf_params(m, depth);
      for (double u : {0.01, 0.3, 1.0, 4.0, 25.0}) {
        const double cf = cf_truncate(m, depth, u);
        const Complex w = eliminate_chain(p, u).final_omega;
        CHECK(std::abs(w - cf) / cf < 1e-12);
        CHECK(std::abs(eval_dispersion_schur(p, u) - cf) / cf < 1e-12);
      }
      // k = 0: every level vanishes, exactly m.
      CHECK(eval_dispersion_schur(p, 0.0) == Complex(m, 0.0));
    }
  }
}

TEST_CASE("params_to_rational examples") {
  const RationalDispersion half = params_to_rational(single(1.0, 0.0, 1.0, 0.0, 0.0));
  REQUIRE(half.num.size() == 1);
  REQUIRE(half.den.size() == 1);
  CHECK(half.num[0].real() == Approx(0.5).epsilon(1e-13));
  CHECK(half.den[0] == Complex(1.0, 0.0));

  const RationalDispersion r = params_to_rational(derive_cf_params(1.0, 2));
  REQUIRE(r.num.size() == 2);
  REQUIRE(r.den.size() == 2);
  CHECK(std::abs(r.num[0] - 1.0) < 1e-12);
  CHECK(std::abs(r.num[1] - 0.75) < 1e-12);
  CHECK(std::abs(r.den[1] - 0.25) < 1e-12);
  CHECK(r.physical);
}

TEST_CASE("continued-fraction rationals obey the degree bound") {
  for (int depth = 1; depth <= 8; ++depth) {
    const RationalDispersion r = params_to_rational(derive_cf_params(1.0, depth), 100.0);
    CHECK(r.num.size() - 1 <= depth);
    CHECK(r.den.size() - 1 <= depth);
    // Convergent p_n/q_n of the fraction: num degree ceil(n/2), den floor(n/2).
    CHECK(r.num.size() - 1 == (depth + 1) / 2);
    CHECK(r.den.size() - 1 == depth / 2);
  }
}

TEST_CASE("Schur and rational routes agree on random admissible sets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index D = 1 + trial % 4;
    const GaussianParams p = testing::random_admissible_params(rng, D);
    CHECK(is_admissible(p, 1.0));
    const RationalDispersion r = params_to_rational(p, 1.0);
    CHECK(r.num.size() - 1 <= D + 1);
    CHECK(r.den.size() - 1 <= D);
    for (int j = 0; j < 10; ++j) {
      const double u = uni(rng);
      const Complex s = eval_dispersion_schur(p, u);
      CHECK(std::abs(rational_eval(r, u) - s) / std::abs(s) < 1e-9);
    }
  }
}

TEST_CASE("rational_eval arithmetic") {
  const RationalDispersion r = four_three();
  CHECK(r.den[0] == Complex(1.0, 0.0));
  CHECK(rational_eval(r, 0.0).real() == Approx(1.0).epsilon(1e-15));
  CHECK(rational_eval(r, 1.0).real() == Approx(1.4).epsilon(1e-15));
  CHECK(rational_eval(r, 3.0).real() == Approx(13.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("admissibility") {
  GaussianParams p = derive_cf_params(1.0, 1);
  CHECK(is_admissible(p, 1.0));
  p.c = -1.0;
  CHECK_FALSE(is_admissible(p, 1.0));
  GaussianParams q = single(-1.0, 0.0, 0.0, 0.0, 1.0);
  CHECK_FALSE(is_admissible(q, 1.0));
  std::mt19937_64 rng(3);
  GaussianParams asym = testing::random_admissible_params(rng, 2);
  asym.A(0, 1) += 0.5;
  CHECK_FALSE(is_admissible(asym, 1.0));
}

TEST_CASE("parent-Hamiltonian split") {
  VectorXc c(1), one(1);
  c[0] = 2.5;
  one[0] = 1.0;
  const PolynomialPair constant = parent_hamiltonian_split(make_rational(c, one));
  REQUIRE(constant.a_poly.size() == 1);
  CHECK(constant.a_poly[0] == Approx(1.0));
  CHECK(constant.b_poly[0] == Approx(6.25));

  const PolynomialPair pp = parent_hamiltonian_split(four_three());
  REQUIRE(pp.a_poly.size() == 3);
  REQUIRE(pp.b_poly.size() == 3);
  const double a[] = {16, 8, 1}, b[] = {16, 24, 9};
  for (int i = 0; i < 3; ++i) {
    CHECK(pp.a_poly[i] == Approx(a[i]).epsilon(1e-12));
    CHECK(pp.b_poly[i] == Approx(b[i]).epsilon(1e-12));
  }

  // A shared (1 + u) factor cancels.
  VectorXc f(2);
  f << 1.0, 1.0;
  const RationalDispersion r = four_three();
  const RationalDispersion padded =
      make_rational(poly::multiply(r.num, f), poly::multiply(r.den, f), 16.0);
  const PolynomialPair reduced = parent_hamiltonian_split(padded);
  CHECK(reduced.a_poly.size() == 3);
  CHECK(reduced.b_poly.size() == 3);
}

TEST_CASE("parent split residual on random physical dispersions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalDispersion r = testing::random_physical_rational(rng, 1 + trial % 4);
    const PolynomialPair pp = parent_hamiltonian_split(r);
    for (int j = 0; j < 50; ++j) {
      const double u = 4.0 * j / 49.0;
      const double w = rational_eval(r, u).real();
      const double lhs = w * w * poly::horner(pp.a_poly, u), rhs = poly::horner(pp.b_poly, u);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), std::abs(rhs)));
    }
  }
}

TEST_CASE("gaussian_core errors") {
  CHECK(kind_of([] { eval_dispersion_schur(derive_cf_params(1.0, 2), -1.0); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { eval_dispersion_schur(single(0.0, 0.0, 1.0, 0.0, 1.0), 1.0); }) == ErrorKind::SingularSystem);
  CHECK(kind_of([] { eliminate_chain(derive_cf_params(1.0, 1), 0.0); }) == ErrorKind::DomainError);
  CHECK(kind_of([] {
          GaussianParams p = derive_cf_params(1.0, 3);
          p.A(0, 2) = p.A(2, 0) = 0.1;
          eliminate_chain(p, 1.0);
        }) == ErrorKind::TopologyError);
  CHECK(kind_of([] {
          GaussianParams p = derive_cf_params(1.0, 2);
          p.z.resize(3);
          validate_shape(p);
        }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([] {
          VectorXc num(1), den(2);
          num << 1.0;
          den << 0.0, 1.0;
          make_rational(num, den);
        }) == ErrorKind::DegenerateDenominator);
  CHECK(kind_of([] {
          VectorXc num(1), den(2);
          num << 1.0;
          den << 1.0, -1.0;  // pole at u = 1
          rational_eval(make_rational(num, den), 1.0);
        }) == ErrorKind::PoleError);
  CHECK(kind_of([] {
          VectorXc num(1), den(1);
          num << -1.0;
          den << 1.0;
          parent_hamiltonian_split(make_rational(num, den));
        }) == ErrorKind::NonPhysical);
  CHECK(kind_of([] { params_to_rational(single(0.0, 0.0, 1.0, 0.0, 1.0)); }) == ErrorKind::DegenerateDenominator);
}

TEST_CASE("imaginary off-diagonal keeps the continued-fraction dispersion real") {
  const GaussianParams p = derive_cf_params(1.0, 4);
  CHECK(p.Z(0, 1) == Complex(0.0, 1.0));
  CHECK(p.A(0, 1) == Complex(0.0, 0.0));
  for (double u : {0.5, 2.0, 9.0}) CHECK(std::abs(eval_dispersion_schur(p, u).imag()) < 1e-13);
}
