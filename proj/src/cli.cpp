#include "cpeps/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>

#include "CLI11.hpp"
#include "cpeps/approximants.hpp"
#include "cpeps/ctns_bridge.hpp"
#include "cpeps/fidelity.hpp"
#include "cpeps/lattice_symmetry.hpp"
#include "cpeps/optimizer.hpp"
#include "cpeps/serialization.hpp"

namespace cpeps {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::string seed;
  CLI::Option* seed_opt = nullptr;
};

// Per-command flags that override config-file keys of the same name.
class Overrides {
 public:
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    opts_.emplace_back(key, app->add_option("--" + key, values_[key], help));
  }
  void apply(KeyValueDoc& doc) const {
    for (const auto& [key, opt] : opts_)
      if (opt->count()) doc.set(key, values_.at(key));
  }

 private:
  std::vector<std::pair<std::string, CLI::Option*>> opts_;
  std::map<std::string, std::string> values_;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Run {
 public:
  Run(std::string command, const Globals& g, KeyValueDoc resolved)
      : command_(std::move(command)), out_(g.out), resolved_(std::move(resolved)) {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_.string() + ": " + ec.message());
  }

  const KeyValueDoc& config() const { return resolved_; }

  // CSV with a comment header echoing the version, time and resolved config.
  void write_csv(const std::string& name, const std::string& body) const {
    std::string text = "# cpeps " CPEPS_VERSION " " + command_ + "\n# generated " + utc_timestamp() + "\n";
    for (const auto& [k, v] : resolved_.entries()) text += "# " + k + " = " + v + "\n";
    write(name, text + body);
  }

  void write(const std::string& name, const std::string& content) const {
    write_file_atomic(out_ / name, content);
    std::cout << (out_ / name).string() << "\n";
  }

 private:
  std::string command_;
  fs::path out_;
  KeyValueDoc resolved_;
};

KeyValueDoc resolve(const Globals& g, const Overrides& flags, std::initializer_list<std::string_view> allowed) {
  KeyValueDoc doc = g.config.empty() ? KeyValueDoc{} : parse_key_value(read_file(g.config));
  flags.apply(doc);
  doc.reject_unknown(allowed);
  return doc;
}

double get_double(const KeyValueDoc& doc, std::string_view key, double fallback) {
  return doc.has(key) ? doc.get_double(key) : fallback;
}

long get_int(const KeyValueDoc& doc, std::string_view key, long fallback) {
  return doc.has(key) ? doc.get_int(key) : fallback;
}

long require_int(const KeyValueDoc& doc, std::string_view key) {
  if (!doc.has(key)) throw Error(ErrorKind::ConfigError, "missing required key '" + std::string(key) + "'");
  return doc.get_int(key);
}

std::vector<double> get_list(const KeyValueDoc& doc, std::string_view key) {
  std::vector<double> out;
  if (!doc.has(key)) return out;
  std::string s = doc.get(key);
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  const VectorXc v = parse_vector(s);
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i].real());
  return out;
}

int check_dimension(long d) {
  if (d < 1 || d > 3) throw Error(ErrorKind::ConfigError, "d must be 1, 2 or 3");
  return static_cast<int>(d);
}

RationalDispersion constant_dispersion(double m, double domain) {
  VectorXc num(1), den(1);
  num[0] = m;
  den[0] = 1.0;
  return make_rational(num, den, domain);
}

RationalDispersion family_rational(const std::string& family, double m, int depth, double domain) {
  if (family == "cf") {
    return depth == 0 ? constant_dispersion(m, domain) : params_to_rational(derive_cf_params(m, depth), domain);
  }
  if (family == "pade") return pade_sqrt(m, 0.0, depth, domain);
  throw Error(ErrorKind::ConfigError, "unknown family '" + family + "'");
}

// ---------------------------------------------------------------- approximate

void cmd_approximate(const Globals& g, const Overrides& flags) {
  const Run run("approximate", g, resolve(g, flags, {"m", "D", "mode", "u0", "Lambda"}));
  const auto& cfg = run.config();
  const double m = get_double(cfg, "m", 1.0);
  const long D = require_int(cfg, "D");
  const std::string mode = cfg.get_or("mode", "cf");
  const double u0 = get_double(cfg, "u0", 0.0);
  const double lambda = get_double(cfg, "Lambda", 1.0);
  if (D < 0) throw Error(ErrorKind::ConfigError, "D must be >= 0");
  if (!(lambda > 0.0)) throw Error(ErrorKind::ConfigError, "Lambda must be positive");
  if (mode != "cf" && mode != "pade") throw Error(ErrorKind::ConfigError, "mode must be cf or pade");

  const double domain = lambda * lambda;
  const RationalDispersion r = mode == "cf" ? family_rational("cf", m, static_cast<int>(D), domain)
                                            : pade_sqrt(m, u0, static_cast<int>(D), domain);

  std::string csv = "k,omega_D,omega_f,abs_err\n";
  for (int i = 1; i <= 512; ++i) {
    const double k = lambda * i / 512.0;
    const double w = rational_eval(r, k * k).real();
    const double wf = omega_free(m, k * k);
    csv += format_double(k) + "," + format_double(w) + "," + format_double(wf) + "," +
           format_double(std::abs(w - wf)) + "\n";
  }
  run.write_csv("dispersion.csv", csv);
  run.write("rational.txt", serialize(r));
  run.write_csv("approximate_summary.csv", "m,D,mode,u0,Lambda,degree,physical,sup_error\n" + format_double(m) +
                                               "," + std::to_string(D) + "," + mode + "," + format_double(u0) +
                                               "," + format_double(lambda) + "," + std::to_string(r.degree()) +
                                               "," + (r.physical ? "true" : "false") + "," +
                                               format_double(sup_error(r, m, lambda)) + "\n");
}

// ------------------------------------------------------------------- fidelity

struct DispersionSource {
  std::optional<RationalDispersion> rational;  // empty for the exact free vacuum
  DispersionFn fn;
  Index D = 0;
};

void cmd_fidelity(const Globals& g, const Overrides& flags) {
  const Run run("fidelity", g,
                resolve(g, flags, {"params", "rational", "family", "D", "m", "d", "Lambda", "N", "freeze_at"}));
  const auto& cfg = run.config();
  const double m = get_double(cfg, "m", 1.0);
  const int d = check_dimension(get_int(cfg, "d", 1));
  std::vector<double> lambdas = get_list(cfg, "Lambda");
  if (lambdas.empty()) throw Error(ErrorKind::ConfigError, "missing required key 'Lambda'");
  const std::vector<double> sizes = get_list(cfg, "N");
  const int sources = cfg.has("params") + cfg.has("rational") + cfg.has("family");
  if (sources != 1) throw Error(ErrorKind::ConfigError, "exactly one of params, rational, family is required");

  std::optional<RationalDispersion> file_rational;
  std::optional<GaussianParams> file_params;
  if (cfg.has("rational")) file_rational = parse_rational(read_file(cfg.get("rational")));
  if (cfg.has("params")) file_params = parse_gaussian_params(read_file(cfg.get("params")));
  const std::string family = cfg.get_or("family", "");
  if (!family.empty() && family != "free" && !cfg.has("D")) {
    throw Error(ErrorKind::ConfigError, "family " + family + " needs D");
  }
  const int depth = static_cast<int>(get_int(cfg, "D", 0));

  auto build = [&](double lambda) -> DispersionSource {
    const double domain = lambda * lambda;
    DispersionSource s;
    if (family == "free") {
      s.fn = FreeDispersion{m};
      return s;
    }
    RationalDispersion r;
    if (file_rational) {
      r = make_rational(file_rational->num, file_rational->den, domain, file_rational->base_point);
    } else if (file_params) {
      r = params_to_rational(*file_params, domain);
    } else {
      r = family_rational(family, m, depth, domain);
    }
    s.rational = r;
    s.fn = as_function(r);
    s.D = r.degree();
    return s;
  };

  std::optional<RescaledDispersion> frozen;
  if (cfg.has("freeze_at")) {
    const double l0 = cfg.get_double("freeze_at");
    const DispersionSource s0 = build(l0);
    if (!s0.rational) throw Error(ErrorKind::ConfigError, "freeze_at needs a rational dispersion");
    frozen = rescale_to_unit_cutoff(*s0.rational, l0);
  }

  std::string rows = fidelity_csv_header() + "\n";
  std::string lattice_rows = "d,Lambda,N,total_log_F,per_site_from_sum,per_site,rel_diff\n";
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::ConfigError, "Lambda must be positive");
    DispersionSource s;
    if (frozen) {
      s.rational = from_unit_cutoff(*frozen, lambda, lambda * lambda);
      s.fn = as_function(*s.rational);
      s.D = s.rational->degree();
    } else {
      s = build(lambda);
    }
    const FidelityReport rep =
        s.rational ? fidelity_report(*s.rational, m, d, lambda) : fidelity_report(s.fn, s.D, m, d, lambda);
    rows += to_csv_row(rep) + "\n";
    for (double n : sizes) {
      const int N = static_cast<int>(n);
      if (N < 1 || N != n) throw Error(ErrorKind::ConfigError, "N must be a positive integer");
      const double total = finite_lattice_log_fidelity(s.fn, m, d, lambda, N);
      const double est = total / std::pow(N * std::numbers::pi, d);
      const double rel = rep.per_site != 0.0 ? std::abs(est - rep.per_site) / std::abs(rep.per_site) : std::abs(est);
      lattice_rows += std::to_string(d) + "," + format_double(lambda) + "," + std::to_string(N) + "," +
                      format_double(total) + "," + format_double(est) + "," + format_double(rep.per_site) + "," +
                      format_double(rel) + "\n";
    }
  }
  run.write_csv("fidelity.csv", rows);
  if (!sizes.empty()) run.write_csv("finite_lattice.csv", lattice_rows);
}

// ------------------------------------------------------------------- optimize

void cmd_optimize(const Globals& g, const Overrides& flags) {
  KeyValueDoc cfg = resolve(g, flags, {"d", "D", "max_iter", "tol", "restarts", "seed", "init", "m", "Lambda"});
  if (g.seed_opt && g.seed_opt->count()) cfg.set("seed", g.seed);
  cfg.set("threads", std::to_string(g.threads));
  const Run run("optimize", g, cfg);

  OptimizationProblem problem;
  problem.d = check_dimension(get_int(cfg, "d", 1));
  problem.D = static_cast<int>(require_int(cfg, "D"));
  if (problem.D < 0) throw Error(ErrorKind::ConfigError, "D must be >= 0");
  OptimizerConfig oc;
  oc.max_iter = static_cast<int>(get_int(cfg, "max_iter", oc.max_iter));
  oc.tol = get_double(cfg, "tol", oc.tol);
  oc.restarts = static_cast<int>(get_int(cfg, "restarts", oc.restarts));
  const long seed = get_int(cfg, "seed", 0);
  if (seed < 0) throw Error(ErrorKind::ConfigError, "seed must be non-negative");
  oc.seed = static_cast<std::uint64_t>(seed);
  oc.threads = g.threads;
  const double m = get_double(cfg, "m", 1.0);
  const double lambda = get_double(cfg, "Lambda", 10.0);

  const std::string init_spec = cfg.get_or("init", "pade");
  RationalCoeffs init;
  if (init_spec == "pade") {
    init = pade_start(problem.D, m, lambda);
  } else if (init_spec == "cf") {
    init = cf_start(problem.D, 2 * problem.D, m, lambda);
  } else if (init_spec.rfind("file:", 0) == 0) {
    const RationalDispersion r = parse_rational(read_file(init_spec.substr(5)));
    init = to_coeffs(rescale_to_unit_cutoff(r, lambda), problem.D);
  } else {
    throw Error(ErrorKind::ConfigError, "init must be pade, cf or file:<path>");
  }

  const double init_value = universal_objective(init, problem.d);
  const OptimizationResult res = optimize_universal_per_site(problem, init, oc);
  run.write_csv("optimize.csv", optimization_csv_header() + ",init_value\n" + to_csv_row(problem, res) + "," +
                                    format_double(init_value) + "\n");
  run.write_csv("optimize_trace.csv", trace_csv(res));
}

// -------------------------------------------------------------------- lattice

void cmd_lattice(const Globals& g, const Overrides& flags) {
  const Run run("lattice", g,
                resolve(g, flags, {"d", "epsilon", "N", "dim_chi", "params", "k", "m", "cf_depth", "Lambda"}));
  const auto& cfg = run.config();
  const int d = check_dimension(get_int(cfg, "d", 1));
  const double dim_chi = get_double(cfg, "dim_chi", default_dim_chi(d));
  const double m = get_double(cfg, "m", 1.0);
  const double k = get_double(cfg, "k", 1.0);
  std::vector<double> eps = get_list(cfg, "epsilon");
  if (eps.empty()) eps = {0.2, 0.1, 0.05};
  for (double e : eps)
    if (!(e > 0.0)) throw Error(ErrorKind::ConfigError, "epsilon must be positive");

  const GaussianParams continuum = cfg.has("params")
                                       ? parse_gaussian_params(read_file(cfg.get("params")))
                                       : derive_cf_params(m, static_cast<int>(get_int(cfg, "cf_depth", 2)));

  const auto rows = convergence_study(continuum, d, dim_chi, eps, k);
  run.write_csv("lattice_convergence.csv", convergence_csv(rows));
  std::string ratios = "epsilon_coarse,epsilon_fine,ratio\n";
  const auto r = richardson_ratios(rows);
  for (std::size_t i = 0; i < r.size(); ++i)
    ratios += format_double(rows[i].epsilon) + "," + format_double(rows[i + 1].epsilon) + "," + format_double(r[i]) +
              "\n";
  run.write_csv("lattice_ratios.csv", ratios);

  if (cfg.has("Lambda")) {
    // Fixed box size N * epsilon_0; modes up to Lambda.
    const double lambda = cfg.get_double("Lambda");
    // Default box: fine momentum spacing in d = 1, affordable mode counts above.
    const long n0 = get_int(cfg, "N", d == 1 ? 4096 : d == 2 ? 1024 : 64);
    const double size = n0 * eps.front();
    const double cont = log_fidelity_density(as_function(params_to_rational(continuum, lambda * lambda)), m, d,
                                             lambda)
                            .value;
    std::string csv = "epsilon,N,lattice_density,continuum_density\n";
    for (double e : eps) {
      LatticeModel model;
      model.d = d;
      model.epsilon = e;
      model.N_per_dim = 2 * static_cast<int>(std::lround(0.5 * size / e));
      model.dim_chi = dim_chi;
      model.bare = bare_from_continuum(continuum, e, d, dim_chi);
      csv += format_double(e) + "," + std::to_string(model.N_per_dim) + "," +
             format_double(lattice_log_fidelity_density(model, m, lambda)) + "," + format_double(cont) + "\n";
    }
    run.write_csv("lattice_fidelity.csv", csv);
  }
}

// ----------------------------------------------------------------------- ctns

void cmd_ctns(const Globals& g, const Overrides& flags) {
  const Run run("ctns", g, resolve(g, flags, {"params"}));
  const auto& cfg = run.config();
  if (!cfg.has("params")) throw Error(ErrorKind::ConfigError, "missing required key 'params'");
  const GaussianParams p = parse_gaussian_params(read_file(cfg.get("params")));

  const CTNSGaussianData data = cpeps_to_ctns(p);
  const GaussianParams back = ctns_to_cpeps_kernel(data);
  const double err = std::max(max_abs_difference(p, back), max_abs_difference(data, cpeps_to_ctns(back)));
  double disp = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double u = 0.1 * i;
    const Complex w0 = eval_dispersion_schur(p, u);
    disp = std::max(disp, std::abs(eval_dispersion_schur(back, u) - w0) / std::abs(w0));
  }
  run.write("ctns.txt", serialize(data));
  run.write_csv("ctns_roundtrip.csv", "roundtrip_max_abs_err,dispersion_max_rel_err\n" + format_double(err) + "," +
                                          format_double(disp) + "\n");
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ConfigError:
    case ErrorKind::ShapeMismatch:
      return 2;
    case ErrorKind::IoError:
      return 4;
    default:
      return 3;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Gaussian cPEPS dispersions, fidelities and lattice checks", "cpeps"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CPEPS_VERSION);

  Globals g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for optimizer restarts")->check(CLI::PositiveNumber);
  g.seed_opt = app.add_option("--seed", g.seed, "random seed (optimize)");

  Overrides approx, fid, opt, lat, ctns;
  auto* a = app.add_subcommand("approximate", "rational approximant of the free dispersion");
  for (const char* key : {"m", "D", "mode", "u0", "Lambda"}) approx.add(a, key, "");
  auto* f = app.add_subcommand("fidelity", "fidelity per site against the free vacuum");
  for (const char* key : {"params", "rational", "family", "D", "m", "d", "Lambda", "N"}) fid.add(f, key, "");
  fid.add(f, "freeze_at", "hold the dimensionless coefficients of this cutoff fixed");
  auto* o = app.add_subcommand("optimize", "maximise the universal per-site log fidelity");
  for (const char* key : {"d", "D", "max_iter", "tol", "restarts", "init", "m", "Lambda"}) opt.add(o, key, "");
  auto* l = app.add_subcommand("lattice", "lattice-to-continuum convergence");
  for (const char* key : {"d", "epsilon", "N", "dim_chi", "params", "k", "m", "cf_depth", "Lambda"}) lat.add(l, key, "");
  auto* c = app.add_subcommand("ctns", "CTNS conversion and round trip");
  ctns.add(c, "params", "GaussianParams file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*a) cmd_approximate(g, approx);
    if (*f) cmd_fidelity(g, fid);
    if (*o) cmd_optimize(g, opt);
    if (*l) cmd_lattice(g, lat);
    if (*c) cmd_ctns(g, ctns);
  } catch (const Error& e) {
    std::cerr << "cpeps: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "cpeps: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "cpeps: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cpeps
