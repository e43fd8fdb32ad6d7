#include "cpeps/fidelity.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cpeps/approximants.hpp"
#include "cpeps/polynomial.hpp"
#include "cpeps/quadrature.hpp"
#include "cpeps/serialization.hpp"

namespace cpeps {

namespace {

constexpr double kDensityTol = 1e-10;
constexpr double kUniversalTol = 1e-9;

void check_dimension(int d) {
  if (d < 1 || d > 3) throw Error(ErrorKind::DomainError, "spatial dimension must be 1, 2 or 3");
}

double pow_int(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

DispersionFn as_function(const RationalDispersion& r) {
  return [r](double u) {
    const Complex w = rational_eval(r, u);
    if (!(w.real() > 0.0) || std::abs(w.imag()) >= 1e-9 * w.real()) {
      throw Error(ErrorKind::DomainError, "dispersion not real-positive at u = " + std::to_string(u));
    }
    return w.real();
  };
}

double mode_log_overlap(double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) {
    throw Error(ErrorKind::DomainError, "mode frequencies must be positive");
  }
  const double diff = std::sqrt(w1) - std::sqrt(w2);
  return 0.5 * std::log1p(-(diff * diff) / (w1 + w2));
}

double radial_measure(int d) {
  check_dimension(d);
  const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  return surface / pow_int(2.0 * std::numbers::pi, d);
}

Integral log_fidelity_density(const DispersionFn& omega, double m, int d, double lambda) {
  check_dimension(d);
  if (!(lambda > 0.0)) throw Error(ErrorKind::DomainError, "Lambda must be positive");
  if (m < 0.0) throw Error(ErrorKind::DomainError, "mass must be non-negative");
  // k = t^2 keeps the m = 0 endpoint (omega_f -> 0) integrable.
  auto integrand = [&](double t) {
    const double k = t * t;
    const double u = k * k;
    return 2.0 * t * pow_int(k, d - 1) * mode_log_overlap(omega(u), omega_free(m, u));
  };
  const auto res = quad::integrate(integrand, 0.0, std::sqrt(lambda), kDensityTol);
  const double w = radial_measure(d);
  return {w * res.value, w * res.error_estimate};
}

Integral log_fidelity_density(const RationalDispersion& r, double m, int d, double lambda) {
  return log_fidelity_density(as_function(r), m, d, lambda);
}

double finite_lattice_log_fidelity(const DispersionFn& omega, double m, int d, double lambda, int n_per_dim) {
  check_dimension(d);
  if (n_per_dim < 1) throw Error(ErrorKind::DomainError, "N must be positive");
  if (!(lambda > 0.0)) throw Error(ErrorKind::DomainError, "Lambda must be positive");
  std::vector<double> axis(static_cast<std::size_t>(n_per_dim));
  for (int n = 0; n < n_per_dim; ++n) axis[n] = lambda * (2.0 * n / n_per_dim - 1.0);

  const double cut = lambda * lambda * (1.0 + 1e-14);
  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    double u = 0.0;
    for (int i = 0; i < d; ++i) u += axis[idx[i]] * axis[idx[i]];
    if (u <= cut) total += mode_log_overlap(omega(u), omega_free(m, u));
    int i = 0;
    while (i < d && ++idx[i] == n_per_dim) idx[i++] = 0;
    if (i == d) break;
  }
  return total;
}

double finite_lattice_log_fidelity(const RationalDispersion& r, double m, int d, double lambda, int n_per_dim) {
  return finite_lattice_log_fidelity(as_function(r), m, d, lambda, n_per_dim);
}

Complex RescaledDispersion::operator()(double ubar) const {
  const Complex den = poly::horner(tilde_den, ubar);
  if (std::abs(den) < 1e-14 * poly::max_abs(tilde_den)) {
    throw Error(ErrorKind::PoleError, "rescaled denominator vanishes");
  }
  return poly::horner(tilde_num, ubar) / den;
}

RescaledDispersion rescale_to_unit_cutoff(const RationalDispersion& r, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::DomainError, "Lambda must be positive");
  RescaledDispersion rt;
  rt.lambda_used = lambda;
  rt.tilde_num = r.num;
  rt.tilde_den = r.den;
  const double l2 = lambda * lambda;
  double s = 1.0 / lambda;
  for (Index a = 0; a < rt.tilde_num.size(); ++a, s *= l2) rt.tilde_num[a] *= s;
  s = 1.0;
  for (Index a = 0; a < rt.tilde_den.size(); ++a, s *= l2) rt.tilde_den[a] *= s;
  return rt;
}

RationalDispersion from_unit_cutoff(const RescaledDispersion& rt, double lambda, double domain_max) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::DomainError, "Lambda must be positive");
  VectorXc num = rt.tilde_num;
  VectorXc den = rt.tilde_den;
  const double l2 = lambda * lambda;
  double s = lambda;
  for (Index a = 0; a < num.size(); ++a, s /= l2) num[a] *= s;
  s = 1.0;
  for (Index a = 0; a < den.size(); ++a, s /= l2) den[a] *= s;
  return make_rational(num, den, domain_max);
}

Integral universal_per_site(const DispersionFn& omega_tilde, int d) {
  check_dimension(d);
  auto integrand = [&](double t) {
    const double kbar = t * t;
    return 2.0 * t * pow_int(kbar, d - 1) * mode_log_overlap(omega_tilde(kbar * kbar), kbar);
  };
  const auto res = quad::integrate(integrand, 0.0, 1.0, kUniversalTol);
  const double w = radial_measure(d);
  return {w * res.value, w * res.error_estimate};
}

Integral universal_per_site(const RescaledDispersion& rt, int d) {
  return universal_per_site(
      [&rt](double ubar) {
        const Complex w = rt(ubar);
        if (!(w.real() > 0.0) || std::abs(w.imag()) >= 1e-9 * w.real()) {
          throw Error(ErrorKind::DomainError, "rescaled dispersion not real-positive");
        }
        return w.real();
      },
      d);
}

double irrelevant_remainder(const RationalDispersion& r, double m, int d, double lambda) {
  return fidelity_report(r, m, d, lambda).remainder;
}

FidelityReport fidelity_report(const DispersionFn& omega, Index bond_dimension, double m, int d, double lambda) {
  FidelityReport rep;
  rep.d = d;
  rep.lambda = lambda;
  rep.m = m;
  rep.bond_dimension = bond_dimension;
  const Integral dens = log_fidelity_density(omega, m, d, lambda);
  const double volume_per_site = pow_int(lambda, d);
  const Integral uni = universal_per_site([&](double ubar) { return omega(ubar * lambda * lambda) / lambda; }, d);
  rep.log_density = dens.value;
  rep.per_site = dens.value / volume_per_site;
  rep.universal = uni.value;
  rep.remainder = rep.per_site - rep.universal;
  rep.quadrature_error_estimate = dens.error_estimate / volume_per_site + uni.error_estimate;
  return rep;
}

FidelityReport fidelity_report(const RationalDispersion& r, double m, int d, double lambda) {
  FidelityReport rep;
  rep.d = d;
  rep.lambda = lambda;
  rep.m = m;
  rep.bond_dimension = r.degree();
  const Integral dens = log_fidelity_density(r, m, d, lambda);
  const double volume_per_site = pow_int(lambda, d);
  const Integral uni = universal_per_site(rescale_to_unit_cutoff(r, lambda), d);
  rep.log_density = dens.value;
  rep.per_site = dens.value / volume_per_site;
  rep.universal = uni.value;
  rep.remainder = rep.per_site - rep.universal;
  rep.quadrature_error_estimate = dens.error_estimate / volume_per_site + uni.error_estimate;
  return rep;
}

std::string fidelity_csv_header() { return "d,Lambda,m,D,log_density,per_site,universal,remainder,quad_err"; }

std::string to_csv_row(const FidelityReport& r) {
  return std::to_string(r.d) + "," + format_double(r.lambda) + "," + format_double(r.m) + "," +
         std::to_string(r.bond_dimension) + "," + format_double(r.log_density) + "," +
         format_double(r.per_site) + "," + format_double(r.universal) + "," + format_double(r.remainder) +
         "," + format_double(r.quadrature_error_estimate);
}

}  // namespace cpeps
