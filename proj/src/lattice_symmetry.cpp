#include "cpeps/lattice_symmetry.hpp"

#include <cmath>
#include <numbers>

#include "cpeps/approximants.hpp"
#include "cpeps/fidelity.hpp"
#include "cpeps/serialization.hpp"

namespace cpeps {

namespace {

constexpr double kSymmetryTol = 1e-12;

struct Exponents {
  double Z, A, z, a, c;
};

Exponents exponents(int d, double dim_chi) {
  const double phi = dim_phi(d);
  return {2.0 - d + 2.0 * dim_chi, -d + 2.0 * dim_chi, 2.0 - d + dim_chi + phi, -d + dim_chi + phi,
          -d + 2.0 * phi};
}

GaussianParams scale_couplings(const GaussianParams& p, double epsilon, int d, double dim_chi, double sign) {
  validate_shape(p);
  if (!(epsilon > 0.0)) throw Error(ErrorKind::DomainError, "epsilon must be positive");
  const Exponents e = exponents(d, dim_chi);
  auto f = [&](double power) { return std::pow(epsilon, sign * power); };
  GaussianParams out = p;
  out.Z = f(e.Z) * p.Z;
  out.A = f(e.A) * p.A;
  out.z = f(e.z) * p.z;
  out.a = f(e.a) * p.a;
  out.c = f(e.c) * p.c;
  return out;
}

double max_entry(const MatrixXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool close(const MatrixXc& x, const MatrixXc& y) {
  const double scale = std::max(1.0, max_entry(y));
  return max_entry(x - y) <= kSymmetryTol * scale;
}

void check_unitary(const MatrixXc& u) {
  if (u.rows() != u.cols()) throw Error(ErrorKind::ShapeMismatch, "representation matrix not square");
  const MatrixXc defect = u.adjoint() * u - MatrixXc::Identity(u.rows(), u.cols());
  if (max_entry(defect) > kSymmetryTol) throw Error(ErrorKind::NonUnitaryRep, "representation not unitary");
}

const double kAngles[] = {std::numbers::pi / 7.0, 1.0, 2.5};

MatrixXc so2_blocks(Index n, double theta) {
  MatrixXc r = MatrixXc::Zero(n, n);
  const double c = std::cos(theta), s = std::sin(theta);
  for (Index b = 0; b + 1 < n; b += 2) {
    r(b, b) = c;
    r(b, b + 1) = -s;
    r(b + 1, b) = s;
    r(b + 1, b + 1) = c;
  }
  return r;
}

}  // namespace

double dim_phi(int d) { return 0.5 * (d - 1); }

double default_dim_chi(int d) { return dim_phi(d); }

void validate_model(const LatticeModel& model) {
  if (model.d < 1 || model.d > 3) throw Error(ErrorKind::DomainError, "d must be 1, 2 or 3");
  if (!(model.epsilon > 0.0)) throw Error(ErrorKind::DomainError, "epsilon must be positive");
  if (model.N_per_dim < 2 || model.N_per_dim % 2 != 0) {
    throw Error(ErrorKind::DomainError, "N must be even and positive");
  }
  validate_shape(model.bare);
}

double grid_momentum(const LatticeModel& model, int n) {
  return 2.0 * std::numbers::pi * n / (model.N_per_dim * model.epsilon);
}

double lattice_symbol(const VectorXd& k, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::DomainError, "epsilon must be positive");
  double total = 0.0;
  for (Index i = 0; i < k.size(); ++i) {
    // 2 - 2 cos x = 4 sin^2(x/2), without the cancellation near x = 0.
    const double s = std::sin(0.5 * k[i] * epsilon);
    total += 4.0 * s * s;
  }
  return total / (epsilon * epsilon);
}

GaussianParams renormalize_couplings(const GaussianParams& bare, double epsilon, int d, double dim_chi) {
  return scale_couplings(bare, epsilon, d, dim_chi, 1.0);
}

GaussianParams bare_from_continuum(const GaussianParams& continuum, double epsilon, int d, double dim_chi) {
  return scale_couplings(continuum, epsilon, d, dim_chi, -1.0);
}

Complex lattice_dispersion(const LatticeModel& model, const VectorXd& k) {
  validate_model(model);
  if (k.size() != model.d) throw Error(ErrorKind::ShapeMismatch, "momentum has wrong dimension");
  const GaussianParams p = renormalize_couplings(model.bare, model.epsilon, model.d, model.dim_chi);
  return eval_dispersion_schur(p, lattice_symbol(k, model.epsilon));
}

double lattice_log_fidelity_density(const LatticeModel& model, double m, double lambda) {
  validate_model(model);
  const GaussianParams p = renormalize_couplings(model.bare, model.epsilon, model.d, model.dim_chi);
  const int n = model.N_per_dim;
  std::vector<int> idx(static_cast<std::size_t>(model.d), -n / 2);
  VectorXd k(model.d);
  double total = 0.0;
  while (true) {
    for (int i = 0; i < model.d; ++i) k[i] = grid_momentum(model, idx[i]);
    const double u = k.squaredNorm();
    if (u <= lambda * lambda) {
      const Complex w = eval_dispersion_schur(p, lattice_symbol(k, model.epsilon));
      total += mode_log_overlap(w.real(), omega_free(m, u));
    }
    int i = 0;
    while (i < model.d && ++idx[i] == n / 2) idx[i++] = -n / 2;
    if (i == model.d) break;
  }
  return total / std::pow(model.linear_size(), model.d);
}

std::vector<ConvergenceRow> convergence_study(const GaussianParams& continuum, int d, double dim_chi,
                                              const std::vector<double>& epsilons, double k) {
  std::vector<ConvergenceRow> rows;
  VectorXd kv = VectorXd::Zero(d);
  kv[0] = k;
  const double cont = eval_dispersion_schur(continuum, k * k).real();
  for (double eps : epsilons) {
    LatticeModel model;
    model.d = d;
    model.epsilon = eps;
    model.N_per_dim = 2;
    model.dim_chi = dim_chi;
    model.bare = bare_from_continuum(continuum, eps, d, dim_chi);
    const double lat = lattice_dispersion(model, kv).real();
    rows.push_back({eps, k, lat, cont, std::abs(lat - cont)});
  }
  return rows;
}

std::vector<double> richardson_ratios(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i - 1].abs_err / rows[i].abs_err);
  return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "epsilon,k,omega_lat,omega_cont,abs_err\n";
  for (const auto& r : rows) {
    out += format_double(r.epsilon) + "," + format_double(r.k) + "," + format_double(r.omega_lat) + "," +
           format_double(r.omega_cont) + "," + format_double(r.abs_err) + "\n";
  }
  return out;
}

QuadraticKernel isotropic_site_kernel(const GaussianParams& p, int d) {
  validate_shape(p);
  if (d < 1 || d > 3) throw Error(ErrorKind::DomainError, "d must be 1, 2 or 3");
  const Index D = p.D();
  QuadraticKernel k;
  k.d = d;
  k.bond = D;
  k.virtual_dim = 2 * d * D;
  k.physical_dim = 1;
  k.form = MatrixXc::Zero(k.virtual_dim + 1, k.virtual_dim + 1);
  const Index phi = k.virtual_dim;
  const VectorXc src = p.a + p.z;
  for (int i = 0; i < d; ++i) {
    const Index chi = i * D, eta = (d + i) * D;
    const MatrixXc sum_block = 0.25 * p.A;
    k.form.block(chi, chi, D, D) += p.Z + sum_block;
    k.form.block(eta, eta, D, D) += p.Z + sum_block;
    k.form.block(chi, eta, D, D) += -p.Z + sum_block;
    k.form.block(eta, chi, D, D) += -p.Z + sum_block;
    k.form.block(chi, phi, D, 1) -= src;
    k.form.block(eta, phi, D, 1) += src;
    k.form.block(phi, chi, 1, D) -= src.transpose();
    k.form.block(phi, eta, 1, D) += src.transpose();
  }
  k.form(phi, phi) = p.c;
  return k;
}

MatrixXd rotation_map(const QuadraticKernel& kernel, int i, int j) {
  const Index D = kernel.bond;
  const int d = kernel.d;
  if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw Error(ErrorKind::ShapeMismatch, "bad rotation plane");
  const Index n = kernel.field_count();
  MatrixXd r = MatrixXd::Identity(n, n);
  auto chi = [&](int l) { return l * D; };
  auto eta = [&](int l) { return (d + l) * D; };
  const MatrixXd id = MatrixXd::Identity(D, D);
  for (Index s : {chi(i), chi(j), eta(i), eta(j)}) r.block(s, s, D, D).setZero();
  // Row = new variable, column = old variable it is expressed in.
  r.block(chi(i), chi(j), D, D) = id;
  r.block(chi(j), eta(i), D, D) = -id;
  r.block(eta(i), eta(j), D, D) = id;
  r.block(eta(j), chi(i), D, D) = -id;
  if (!kernel.complex_fields) return r;
  MatrixXd full = MatrixXd::Zero(2 * n, 2 * n);
  full.topLeftCorner(n, n) = r;
  full.bottomRightCorner(n, n) = r;
  return full;
}

QuadraticKernel rotate(const QuadraticKernel& kernel, int i, int j) {
  const MatrixXc r = rotation_map(kernel, i, j).cast<Complex>();
  QuadraticKernel out = kernel;
  out.form = r.transpose() * kernel.form * r;
  return out;
}

namespace {

void check_kernel_shape(const QuadraticKernel& kernel) {
  const Index n = kernel.field_count() * (kernel.complex_fields ? 2 : 1);
  if (kernel.form.rows() != n || kernel.form.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch, "kernel form does not match its field counts");
  }
}

}  // namespace

bool rotation_invariance_check(const QuadraticKernel& kernel, int d) {
  if (d < 2 || d > 3 || kernel.d != d) throw Error(ErrorKind::ShapeMismatch, "rotations need d = 2 or 3");
  check_kernel_shape(kernel);
  if (kernel.virtual_dim != 2 * d * kernel.bond) {
    throw Error(ErrorKind::ShapeMismatch, "virtual block is not 2 d legs of size bond");
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!close(rotate(kernel, i, j).form, kernel.form)) return false;
  return true;
}

GroupRepresentation u1_representation(Index physical_dim, Index virtual_dim, double physical_charge,
                                      double virtual_charge) {
  GroupRepresentation rep;
  for (double theta : kAngles) {
    for (double t : {theta, -theta}) {
      GroupElement g;
      g.physical = MatrixXc::Identity(physical_dim, physical_dim) * std::polar(1.0, physical_charge * t);
      g.virtual_ = MatrixXc::Identity(virtual_dim, virtual_dim) * std::polar(1.0, virtual_charge * t);
      rep.elements.push_back(std::move(g));
    }
  }
  return rep;
}

GroupRepresentation o2_representation(Index physical_dim, Index virtual_dim) {
  if (physical_dim % 2 != 0 || virtual_dim % 2 != 0) {
    throw Error(ErrorKind::ShapeMismatch, "O(2) doublets need even dimensions");
  }
  GroupRepresentation rep;
  for (double theta : kAngles) {
    for (double t : {theta, -theta}) {
      rep.elements.push_back({so2_blocks(physical_dim, t), so2_blocks(virtual_dim, t)});
    }
  }
  return rep;
}

bool global_symmetry_check(const QuadraticKernel& kernel, const GroupRepresentation& rep) {
  check_kernel_shape(kernel);
  const Index nv = kernel.virtual_dim, np = kernel.physical_dim, n = nv + np;
  for (const auto& g : rep.elements) {
    if (g.virtual_.rows() != nv || g.physical.rows() != np) {
      throw Error(ErrorKind::ShapeMismatch, "representation dimensions do not match the kernel");
    }
    check_unitary(g.virtual_);
    check_unitary(g.physical);
  }
  for (const auto& g : rep.elements) {
    MatrixXc t = MatrixXc::Zero(kernel.form.rows(), kernel.form.cols());
    t.block(0, 0, nv, nv) = g.virtual_;
    t.block(nv, nv, np, np) = g.physical;
    if (kernel.complex_fields) {
      t.block(n, n, nv, nv) = g.virtual_.conjugate();
      t.block(n + nv, n + nv, np, np) = g.physical.conjugate();
    }
    if (!close(t.transpose() * kernel.form * t, kernel.form)) return false;
  }
  return true;
}

}  // namespace cpeps
