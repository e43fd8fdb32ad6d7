#include "cpeps/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "cpeps/approximants.hpp"
#include "cpeps/polynomial.hpp"
#include "cpeps/serialization.hpp"

namespace cpeps {

namespace {

constexpr int kCheckPoints = 256;
constexpr double kPenaltyWeight = 1e3;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

VectorXd pack(const RationalCoeffs& c) {
  const Index n = c.num.size();
  VectorXd x(2 * n - 1);
  x.head(n) = c.num;
  x.tail(n - 1) = c.den.tail(n - 1);
  return x;
}

RationalCoeffs unpack(const VectorXd& x) {
  const Index n = (x.size() + 1) / 2;
  RationalCoeffs c;
  c.num = x.head(n);
  c.den.resize(n);
  c.den[0] = 1.0;
  c.den.tail(n - 1) = x.tail(n - 1);
  return c;
}

struct Feasibility {
  bool admissible = true;
  double violation = 0.0;  // sum of squared negative parts times dkbar
  double margin = std::numeric_limits<double>::infinity();
};

Feasibility check_grid(const RationalCoeffs& c) {
  Feasibility f;
  const double h = 1.0 / kCheckPoints;
  for (int j = 1; j <= kCheckPoints; ++j) {
    const double kbar = j * h;
    const double ubar = kbar * kbar;
    const double den = c.denominator(ubar);
    double worst = den;
    if (den > 0.0) worst = std::min(worst, poly::horner(c.num, ubar) / den);
    f.margin = std::min(f.margin, worst);
    if (!(worst > 0.0)) {
      f.admissible = false;
      const double neg = std::isfinite(worst) ? std::min(worst, 0.0) : -1.0;
      f.violation += neg * neg * h;
    }
  }
  return f;
}

struct RunResult {
  OptimizationResult result;
  double best_neg = std::numeric_limits<double>::infinity();
};

class PenalisedObjective {
 public:
  PenalisedObjective(int d, double infeasible_base) : d_(d), base_(infeasible_base) {}

  // Negated objective, with feasible points recorded.
  double operator()(const VectorXd& x) {
    ++evaluations;
    const RationalCoeffs c = unpack(x);
    const Feasibility f = check_grid(c);
    if (!f.admissible) return base_ + kPenaltyWeight * f.violation;
    double value = 0.0;
    try {
      value = universal_objective(c, d_);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DomainError || e.kind() == ErrorKind::PoleError) return base_;
      throw;
    }
    if (-value < best_neg) {
      best_neg = -value;
      best = c;
      best_margin = f.margin;
    }
    return -value;
  }

  int evaluations = 0;
  double best_neg = std::numeric_limits<double>::infinity();
  RationalCoeffs best;
  double best_margin = 0.0;

 private:
  int d_;
  double base_;
};

RunResult nelder_mead(const OptimizationProblem& problem, const RationalCoeffs& init, double init_value,
                      const OptimizerConfig& config, int restart) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(restart);
  PenalisedObjective objective(problem.d, -init_value + 1.0);

  const VectorXd x0 = pack(init);
  const Index n = x0.size();
  std::vector<VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::mt19937_64 rng(seed);
  for (Index i = 0; i < n; ++i) {
    double step = std::abs(x0[i]) > 1e-3 ? 0.1 * std::abs(x0[i]) : 0.01;
    if (restart > 0) {
      step *= 0.5 + uniform01(rng);
      if (uniform01(rng) < 0.5) step = -step;
    }
    simplex[static_cast<std::size_t>(i + 1)][i] += step;
  }
  std::vector<double> f(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) f[i] = objective(simplex[i]);

  RunResult run;
  OptimizationResult& res = run.result;
  res.seed = seed;
  std::vector<std::size_t> order(simplex.size());

  for (int iter = 0; iter < config.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    {
      std::vector<VectorXd> s2;
      std::vector<double> f2;
      for (auto k : order) {
        s2.push_back(simplex[k]);
        f2.push_back(f[k]);
      }
      simplex.swap(s2);
      f.swap(f2);
    }
    double diameter = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
      diameter = std::max(diameter, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    if (diameter < config.tol) {
      res.converged = true;
      break;
    }
    res.iterations = iter + 1;

    const std::size_t w = simplex.size() - 1;
    VectorXd centroid = VectorXd::Zero(n);
    for (std::size_t i = 0; i < w; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(w);

    const VectorXd xr = centroid + (centroid - simplex[w]);
    const double fr = objective(xr);
    bool shrink = false;
    if (fr < f[0]) {
      const VectorXd xe = centroid + 2.0 * (centroid - simplex[w]);
      const double fe = objective(xe);
      if (fe < fr) {
        simplex[w] = xe;
        f[w] = fe;
      } else {
        simplex[w] = xr;
        f[w] = fr;
      }
    } else if (fr < f[w - 1]) {
      simplex[w] = xr;
      f[w] = fr;
    } else if (fr < f[w]) {
      const VectorXd xc = centroid + 0.5 * (xr - centroid);
      const double fc = objective(xc);
      if (fc <= fr) {
        simplex[w] = xc;
        f[w] = fc;
      } else {
        shrink = true;
      }
    } else {
      const VectorXd xc = centroid + 0.5 * (simplex[w] - centroid);
      const double fc = objective(xc);
      if (fc < f[w]) {
        simplex[w] = xc;
        f[w] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
        f[i] = objective(simplex[i]);
      }
    }
    res.trace.push_back(-objective.best_neg);
  }

  res.evaluations = objective.evaluations;
  res.best_coeffs = objective.best;
  res.best_value = -objective.best_neg;
  res.boundary_margin = objective.best_margin;
  run.best_neg = objective.best_neg;
  return run;
}

}  // namespace

double RationalCoeffs::omega(double ubar) const { return poly::horner(num, ubar) / poly::horner(den, ubar); }

double RationalCoeffs::denominator(double ubar) const { return poly::horner(den, ubar); }

RationalCoeffs make_coeffs(VectorXd num, VectorXd den) {
  if (num.size() < 1 || den.size() != num.size()) {
    throw Error(ErrorKind::ShapeMismatch, "num and den must both have D+1 coefficients");
  }
  if (den[0] != 1.0) throw Error(ErrorKind::ShapeMismatch, "den[0] must be 1");
  return {std::move(num), std::move(den)};
}

RationalCoeffs to_coeffs(const RescaledDispersion& rt, int D) {
  auto real_part = [&](const VectorXc& v) {
    const double scale = poly::max_abs(v);
    VectorXd out = v.real();
    if (v.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw Error(ErrorKind::ShapeMismatch, "rescaled coefficients are not real");
    }
    return poly::trim(out, 1e-12);
  };
  VectorXd num = real_part(rt.tilde_num);
  VectorXd den = real_part(rt.tilde_den);
  if (num.size() > D + 1 || den.size() > D + 1) {
    throw Error(ErrorKind::ShapeMismatch, "dispersion degree exceeds D = " + std::to_string(D));
  }
  const double q0 = den[0];
  RationalCoeffs c;
  c.num = VectorXd::Zero(D + 1);
  c.den = VectorXd::Zero(D + 1);
  c.num.head(num.size()) = num / q0;
  c.den.head(den.size()) = den / q0;
  c.den[0] = 1.0;
  return c;
}

bool is_admissible(const RationalCoeffs& coeffs, int /*d*/) { return check_grid(coeffs).admissible; }

double universal_objective(const RationalCoeffs& coeffs, int d) {
  return universal_per_site(
             [&coeffs](double ubar) {
               const double den = coeffs.denominator(ubar);
               const double w = poly::horner(coeffs.num, ubar) / den;
               if (!(den > 0.0) || !(w > 0.0)) {
                 throw Error(ErrorKind::DomainError, "omega~ not positive at ubar = " + std::to_string(ubar));
               }
               return w;
             },
             d)
      .value;
}

RationalCoeffs pade_start(int D, double m, double lambda) {
  return to_coeffs(rescale_to_unit_cutoff(pade_sqrt(m, 0.0, D, lambda * lambda), lambda), D);
}

RationalCoeffs cf_start(int D, int cf_depth, double m, double lambda) {
  if (cf_depth == 0) {
    RationalCoeffs c{VectorXd::Zero(D + 1), VectorXd::Zero(D + 1)};
    c.num[0] = m / lambda;
    c.den[0] = 1.0;
    return c;
  }
  const RationalDispersion r = params_to_rational(derive_cf_params(m, cf_depth), lambda * lambda);
  return to_coeffs(rescale_to_unit_cutoff(r, lambda), D);
}

OptimizationResult optimize_universal_per_site(const OptimizationProblem& problem, const RationalCoeffs& init,
                                               const OptimizerConfig& config) {
  if (problem.d < 1 || problem.d > 3) throw Error(ErrorKind::DomainError, "d must be 1, 2 or 3");
  if (init.num.size() != problem.D + 1 || init.den.size() != problem.D + 1 || init.den[0] != 1.0) {
    throw Error(ErrorKind::ShapeMismatch, "init coefficients do not match D");
  }
  if (config.restarts < 1 || config.max_iter < 0 || !(config.tol > 0.0)) {
    throw Error(ErrorKind::ConfigError, "restarts >= 1, max_iter >= 0 and tol > 0 required");
  }
  if (!is_admissible(init, problem.d)) throw Error(ErrorKind::InfeasibleStart, "init not admissible");

  const auto objective_failure = [](const Error& e) {
    return e.kind() == ErrorKind::QuadratureFailure ? Error(ErrorKind::ObjectiveFailure, e.what()) : e;
  };

  double init_value = 0.0;
  try {
    init_value = universal_objective(init, problem.d);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainError) throw Error(ErrorKind::InfeasibleStart, e.what());
    throw objective_failure(e);
  }

  const auto restarts = static_cast<std::size_t>(config.restarts);
  std::vector<RunResult> runs(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  auto work = [&](std::size_t r) {
    try {
      runs[r] = nelder_mead(problem, init, init_value, config, static_cast<int>(r));
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.threads, 1)), 1,
                                                      restarts);
  if (threads == 1) {
    for (std::size_t r = 0; r < restarts; ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < restarts; r += threads) work(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      throw objective_failure(err);
    }
  }

  // Lowest negated objective wins; restarts are in seed order so the first
  // minimum is also the smallest seed.
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].best_neg < runs[best].best_neg) best = r;
  return runs[best].result;
}

std::string optimization_csv_header() {
  return "d,D,seed,iterations,evaluations,converged,best_value,boundary_margin,num,den";
}

std::string to_csv_row(const OptimizationProblem& problem, const OptimizationResult& r) {
  auto list = [](const VectorXd& v) {
    std::string s;
    for (Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
  };
  return std::to_string(problem.d) + "," + std::to_string(problem.D) + "," + std::to_string(r.seed) + "," +
         std::to_string(r.iterations) + "," + std::to_string(r.evaluations) + "," +
         (r.converged ? "true" : "false") + "," + format_double(r.best_value) + "," +
         format_double(r.boundary_margin) + "," + list(r.best_coeffs.num) + "," + list(r.best_coeffs.den);
}

std::string trace_csv(const OptimizationResult& result) {
  std::string out = "iteration,best_value\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(result.trace[i]) + "\n";
  return out;
}

}  // namespace cpeps
