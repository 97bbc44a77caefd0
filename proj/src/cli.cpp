#include "orbitalis/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbitalis/clifford.hpp"
#include "orbitalis/errors.hpp"
#include "orbitalis/heat_oracle.hpp"
#include "orbitalis/hypoelliptic.hpp"
#include "orbitalis/lie_algebra.hpp"
#include "orbitalis/orbital.hpp"
#include "orbitalis/trace_zeta.hpp"
#include "orbitalis/validate.hpp"

namespace orbitalis {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  void emit(std::ostream& os) const {
    auto line = [&](const Row& r) {
      for (size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        os << r[i];
      }
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

// "1", "1,2,3" or "start:stop:count[:log]"
std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
      throw UsageError("sweep must be start:stop:count[:log|lin]");
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const int count = std::stoi(parts[2]);
    const bool log_scale = parts.size() == 4 && parts[3] == "log";
    if (count < 1) throw UsageError("sweep count must be >= 1");
    if (log_scale && (start <= 0.0 || stop <= 0.0))
      throw UsageError("log sweep needs positive endpoints");
    for (int i = 0; i < count; ++i) {
      const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(log_scale ? start * std::pow(stop / start, s)
                              : start + (stop - start) * s);
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw UsageError("empty sweep");
  return out;
}

struct GammaSpec {
  std::string kind = "identity";
  double a = 0.0;
  double phi = 0.0;
};

GammaSpec parse_gamma(const std::string& spec) {
  GammaSpec g;
  const auto colon = spec.find(':');
  g.kind = spec.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string rest = spec.substr(colon + 1);
    const auto eq = rest.find('=');
    if (eq == std::string::npos) throw UsageError("gamma parameter must be name=value");
    const std::string name = rest.substr(0, eq);
    const double value = std::stod(rest.substr(eq + 1));
    if (name == "a") g.a = value;
    else if (name == "phi") g.phi = value;
    else throw UsageError("unknown gamma parameter --gamma " + name);
  }
  if (g.kind != "identity" && g.kind != "hyperbolic" && g.kind != "elliptic" &&
      g.kind != "translation")
    throw UsageError("gamma kind must be identity|hyperbolic|elliptic|translation");
  return g;
}

SemisimpleElement make_gamma(const LieAlgebraModel& model, const GammaSpec& g) {
  if (g.kind == "identity") return identity_element(model);
  if (g.kind == "hyperbolic") return sl2_hyperbolic(model, g.a);
  if (g.kind == "elliptic") return sl2_elliptic(model, g.phi);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(model.dim_p());
  a[0] = g.a;
  return abelian_translation(model, a);
}

std::string gamma_label(const GammaSpec& g) {
  if (g.kind == "identity") return "identity";
  if (g.kind == "elliptic") return "elliptic:phi=" + fmt(g.phi);
  return g.kind + ":a=" + fmt(g.a);
}

void write_output(const Table& table, const std::string& out_path, std::ostream& fallback) {
  if (out_path.empty()) {
    table.emit(fallback);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot open output path --out " + out_path);
  table.emit(f);
}

void write_plot(const std::vector<std::pair<double, double>>& points, const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open plot path --plot-out " + path);
  for (const auto& [x, y] : points) f << fmt(x) << ' ' << fmt(y) << '\n';
}

// flags from a JSON config file, inserted ahead of the command line so that
// explicitly passed flags win under the take-last policy
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config file --config " + config_path);
  nlohmann::json j;
  in >> j;
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> merged;
  if (!args.empty()) merged.push_back(args[0]);  // subcommand first
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") continue;
    merged.push_back("--" + key);
    if (value.is_boolean()) {
      if (!value.get<bool>()) merged.pop_back();
      continue;
    }
    merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  for (size_t i = args.empty() ? 0 : 1; i < args.size(); ++i) merged.push_back(args[i]);
  return merged;
}

double geometric_shift(const LieAlgebraModel& model) {
  auto [tr_p, tr_k] = casimir_constants(model);
  return -(tr_p / 16.0 + tr_k / 48.0);
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical laboratory for orbital integrals, trace formulas and torsion"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_path, plot_path, config_path;
  app.add_option("--config", config_path, "JSON config file mirroring flags");

  // orbital
  auto* orbital = app.add_subcommand("orbital", "heat orbital integrals");
  std::string orb_model = "sl2", orb_gamma = "hyperbolic:a=1", orb_method = "both";
  std::string orb_t = "1", orb_shift = "auto";
  double orb_tol = 1e-9;
  int orb_nodes = 64;
  orbital->add_option("--model", orb_model, "sl2 or r1");
  orbital->add_option("--gamma", orb_gamma, "identity | hyperbolic:a=V | elliptic:phi=V | translation:a=V");
  orbital->add_option("--t", orb_t, "time sweep");
  orbital->add_option("--method", orb_method, "explicit|oracle|rank-one|closed|both");
  orbital->add_option("--shift-A", orb_shift, "scalar shift or 'auto' (geometric)");
  orbital->add_option("--quad-tol", orb_tol, "quadrature tolerance");
  orbital->add_option("--quad-nodes", orb_nodes, "Gauss-Hermite nodes per axis");

  // trace
  auto* trace = app.add_subcommand("trace", "assembled trace formulas");
  std::string trace_t = "1", trace_spectrum;
  double trace_vol = 4.0 * M_PI;
  int trace_kmax = 64;
  trace->add_option("--t", trace_t, "time sweep");
  trace->add_option("--spectrum", trace_spectrum, "length spectrum JSON (default: circle model)");
  trace->add_option("--vol", trace_vol, "volume of the identity class");
  trace->add_option("--k-max", trace_kmax, "power cap for spectrum classes");

  // poisson
  auto* poisson = app.add_subcommand("poisson", "two-sided summation identity");
  std::string poisson_t = "1";
  poisson->add_option("--t", poisson_t, "time sweep");

  // surface-trace
  auto* surf = app.add_subcommand("surface-trace", "hyperbolic surface heat trace");
  std::string surf_t = "1", surf_spectrum;
  double surf_vol = 4.0 * M_PI;
  int surf_kmax = 1000;
  surf->add_option("--t", surf_t, "time sweep");
  surf->add_option("--spectrum", surf_spectrum, "length spectrum JSON")->required();
  surf->add_option("--vol", surf_vol, "surface volume");
  surf->add_option("--k-max", surf_kmax, "geodesic power cap");

  // hypo
  auto* hypo = app.add_subcommand("hypo", "1-D hypoelliptic model supertrace");
  std::string hypo_a = "1", hypo_b = "1", hypo_t = "1";
  hypo->add_option("--a", hypo_a, "translation sweep");
  hypo->add_option("--b", hypo_b, "deformation sweep");
  hypo->add_option("--t", hypo_t, "time sweep");

  // algebra-check
  auto* algebra = app.add_subcommand("algebra-check", "Clifford/Dirac and oscillator identities");
  int alg_n = 1, alg_D = 6;
  std::uint64_t alg_seed = 20240801;
  algebra->add_option("--n", alg_n, "oscillator dimension");
  algebra->add_option("--D", alg_D, "polynomial degree cap");
  algebra->add_option("--seed", alg_seed, "seed for randomized identities");

  // torsion
  auto* torsion = app.add_subcommand("torsion", "analytic torsion");
  std::string tor_theta = "3.14159265358979312", tor_file;
  torsion->add_option("--theta", tor_theta, "holonomy sweep (circle)");
  torsion->add_option("--spectral-file", tor_file, "CSV lambda,multiplicity");

  // zeta
  auto* zeta = app.add_subcommand("zeta", "Ruelle dynamical zeta function");
  std::string zeta_spectrum, zeta_sigma = "2";
  double zeta_theta = std::nan("");
  zeta->add_option("--spectrum", zeta_spectrum, "length spectrum JSON");
  zeta->add_option("--sigma", zeta_sigma, "real sigma sweep");
  zeta->add_option("--circle-theta", zeta_theta, "circle holonomy (closed form)");

  // fried-check
  auto* fried = app.add_subcommand("fried-check", "R(0) = T^2 on the circle");
  std::string fried_theta = "3.14159265358979312";
  fried->add_option("--theta", fried_theta, "holonomy sweep");

  // validate
  auto* validate = app.add_subcommand("validate", "run every module's invariant suite");
  std::uint64_t val_seed = 20240801;
  validate->add_option("--seed", val_seed, "seed for randomized checks");

  for (CLI::App* sub : {orbital, trace, poisson, surf, hypo, algebra, torsion, zeta, fried,
                        validate}) {
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    sub->add_option("--plot-out", plot_path, "two-column plot data path");
    sub->add_option("--config", config_path, "JSON config file mirroring flags");
  }

  std::vector<std::string> args;
  try {
    args = apply_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    Table table;
    std::vector<std::pair<double, double>> plot;

    if (orbital->parsed()) {
      const LieAlgebraModel model =
          orb_model == "sl2"                               ? build_sl2_model()
          : orb_model == "r1"                              ? build_abelian_model(1)
          : orb_model.size() > 5 &&
                  orb_model.substr(orb_model.size() - 5) == ".json"
              ? load_model_json(orb_model)
              : throw UsageError("--model must be sl2, r1 or a structure-constant .json file");
      const GammaSpec gs = parse_gamma(orb_gamma);
      const SemisimpleElement gamma = make_gamma(model, gs);
      const double shift = orb_shift == "auto" ? geometric_shift(model) : std::stod(orb_shift);
      QuadratureConfig quad{orb_nodes, orb_tol};
      const double s0 = geometric_shift(model);
      if (orb_method == "both") {
        table.header = {"model", "gamma", "t", "shift_A", "explicit", "oracle", "residual"};
        for (double t : parse_sweep(orb_t)) {
          HeatParameters hp = scalar_heat_parameters(t, shift);
          const double ev = heat_orbital_integral(model, gamma, hp, quad).value;
          const double ov =
              direct_orbital_integral(model, gamma, t).value * std::exp(t * (s0 - shift));
          table.rows.push_back({orb_model, gamma_label(gs), fmt(t), fmt(shift), fmt(ev),
                                fmt(ov), fmt(std::abs(ev - ov))});
          plot.emplace_back(t, ev);
        }
      } else {
        table.header = {"model", "gamma", "t", "shift_A", "method", "value", "abs_error",
                        "nodes"};
        for (double t : parse_sweep(orb_t)) {
          HeatParameters hp = scalar_heat_parameters(t, shift);
          OrbitalIntegralResult r;
          if (orb_method == "explicit") r = heat_orbital_integral(model, gamma, hp, quad);
          else if (orb_method == "rank-one") r = rank_one_closed_form(model, gamma, hp);
          else if (orb_method == "closed") r = sl2_hyperbolic_closed_form(gs.a, t, shift);
          else if (orb_method == "oracle") {
            r = direct_orbital_integral(model, gamma, t);
            r.value *= std::exp(t * (s0 - shift));
          } else throw UsageError("unknown --method " + orb_method);
          table.rows.push_back({orb_model, gamma_label(gs), fmt(t), fmt(shift),
                                method_name(r.method), fmt(r.value),
                                fmt(r.abs_error_estimate), std::to_string(r.nodes_used)});
          plot.emplace_back(t, r.value);
        }
      }
    } else if (trace->parsed()) {
      if (trace_spectrum.empty()) {
        table.header = {"t", "assembled", "geometric_side", "residual"};
        for (double t : parse_sweep(trace_t)) {
          const double assembled = selberg_circle(t);
          const double geometric = poisson_both_sides(t).second;
          table.rows.push_back(
              {fmt(t), fmt(assembled), fmt(geometric), fmt(std::abs(assembled - geometric))});
          plot.emplace_back(t, assembled);
        }
      } else {
        const LengthSpectrum spec = load_length_spectrum_json(trace_spectrum);
        const LieAlgebraModel sl2 = build_sl2_model();
        table.header = {"t", "assembled", "surface_trace", "residual"};
        for (double t : parse_sweep(trace_t)) {
          const HeatParameters hp = geometric_heat_parameters(sl2, t);
          std::vector<ConjugacyClassDescriptor> classes;
          classes.push_back({trace_vol, identity_element(sl2)});
          // one class per (primitive class, power); multiplicity counts the
          // primitive classes of that length, orientations included
          for (const auto& e : spec.entries)
            for (int k = 1; k <= trace_kmax; ++k) {
              classes.push_back({e.multiplicity * e.length, sl2_hyperbolic(sl2, k * e.length)});
              if (std::exp(-0.5 * k * k * e.length * e.length / t) < 1e-18) break;
            }
          const double assembled = selberg_assemble(sl2, classes, hp);
          const double surface = surface_heat_trace(trace_vol, spec, t, trace_kmax);
          table.rows.push_back(
              {fmt(t), fmt(assembled), fmt(surface), fmt(std::abs(assembled - surface))});
          plot.emplace_back(t, assembled);
        }
      }
    } else if (poisson->parsed()) {
      table.header = {"t", "spectral_side", "geometric_side", "residual"};
      for (double t : parse_sweep(poisson_t)) {
        auto [s, g] = poisson_both_sides(t);
        table.rows.push_back({fmt(t), fmt(s), fmt(g), fmt(std::abs(s - g))});
        plot.emplace_back(t, s);
      }
    } else if (surf->parsed()) {
      const LengthSpectrum spec = load_length_spectrum_json(surf_spectrum);
      table.header = {"t", "value"};
      for (double t : parse_sweep(surf_t)) {
        const double v = surface_heat_trace(surf_vol, spec, t, surf_kmax);
        table.rows.push_back({fmt(t), fmt(v)});
        plot.emplace_back(t, v);
      }
    } else if (hypo->parsed()) {
      table.header = {"a", "b", "t", "supertrace", "closed_form", "residual"};
      bool first = true;
      for (double a : parse_sweep(hypo_a))
        for (double b : parse_sweep(hypo_b))
          for (double t : parse_sweep(hypo_t)) {
            const double st = hypo_supertrace(a, b, t);
            const double closed = std::exp(-a * a / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
            table.rows.push_back(
                {fmt(a), fmt(b), fmt(t), fmt(st), fmt(closed), fmt(std::abs(st - closed))});
            if (first) {
              const LocalizationProfile prof = localization_profile(a, b, t);
              for (int i = 0; i < prof.y.size(); ++i) plot.emplace_back(prof.y[i], prof.value[i]);
              first = false;
            }
          }
    } else if (algebra->parsed()) {
      table.header = {"check", "residual", "tolerance", "pass"};
      auto add = [&](const std::string& name, double res, double tol) {
        table.rows.push_back({name, fmt(res), fmt(tol), res <= tol ? "1" : "0"});
      };
      const LieAlgebraModel sl2 = build_sl2_model();
      const CliffordModel cl(sl2);
      add("clifford_relations", cl.relations_residual(), 1e-13);
      std::vector<Eigen::MatrixXd> adjoint;
      for (int i = 0; i < 3; ++i) adjoint.push_back(sl2.ad_basis(i));
      add("kostant_adjoint", kostant_dirac_residual(sl2, adjoint), 1e-11);
      add("kostant_trivial",
          kostant_dirac_residual(sl2, std::vector<Eigen::MatrixXd>(3, Eigen::MatrixXd::Zero(1, 1))),
          1e-11);
      const WeitzenbockReport wz = verify_weitzenbock(alg_n, alg_D);
      add("weitzenbock_commutator", wz.commutator_residual, 1e-12);
      add("weitzenbock_squares", wz.square_residual, 1e-12);
      add("weitzenbock_adjoint", wz.adjoint_residual, 1e-12);
      add("weitzenbock_kernel_dim_minus_1", std::abs(wz.kernel_dim - 1.0), 0.5);
      add("weitzenbock_gap_minus_1", std::abs(wz.spectral_gap - 1.0), 1e-10);
      std::mt19937_64 rng(alg_seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      double sup_res = 0.0;
      for (int trial = 0; trial < 16; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd u(d, d);
        do {
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) u(i, j) = normal(rng);
        } while (std::abs(u.determinant()) < 1e-3);
        const SupertraceIdentity id = lambda_supertrace_identity(u);
        sup_res = std::max({sup_res, std::abs(id.lhs - id.rhs), std::abs(id.lhs_n - id.rhs_n)});
      }
      add("lambda_supertrace_random", sup_res, 1e-12);
    } else if (torsion->parsed()) {
      if (!tor_file.empty()) {
        std::ifstream in(tor_file);
        if (!in) throw UsageError("cannot open --spectral-file " + tor_file);
        std::vector<std::pair<double, double>> spec;
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#' || line.rfind("lambda", 0) == 0) continue;
          std::stringstream ss(line);
          std::string lam, mult;
          std::getline(ss, lam, ',');
          std::getline(ss, mult, ',');
          spec.emplace_back(std::stod(lam), mult.empty() ? 1.0 : std::stod(mult));
        }
        const TorsionResult r = torsion_from_eigenvalues(spec);
        table.header = {"log_T", "T", "method", "error_estimate"};
        table.rows.push_back({fmt(r.log_t), fmt(std::exp(r.log_t)), "heat_mellin_approx",
                              fmt(r.error_estimate)});
      } else {
        table.header = {"theta", "log_T", "T", "method", "error_estimate", "oracle_residual"};
        for (double theta : parse_sweep(tor_theta)) {
          const TorsionResult r = analytic_torsion_circle(theta);
          const double oracle = circle_log_det_oracle(theta);
          table.rows.push_back({fmt(theta), fmt(r.log_t), fmt(std::exp(r.log_t)),
                                "hurwitz_exact", fmt(r.error_estimate),
                                fmt(std::abs(-0.5 * oracle - r.log_t))});
          plot.emplace_back(theta, r.log_t);
        }
      }
    } else if (zeta->parsed()) {
      table.header = {"sigma_re", "sigma_im", "xi_re", "xi_im", "R_re", "R_im"};
      if (!std::isnan(zeta_theta)) {
        for (double s : parse_sweep(zeta_sigma)) {
          const std::complex<double> R = ruelle_circle_r(zeta_theta, s);
          const std::complex<double> xi = std::log(R);
          table.rows.push_back(
              {fmt(s), "0", fmt(xi.real()), fmt(xi.imag()), fmt(R.real()), fmt(R.imag())});
          plot.emplace_back(s, R.real());
        }
      } else {
        if (zeta_spectrum.empty()) throw UsageError("zeta needs --spectrum or --circle-theta");
        const LengthSpectrum spec = load_length_spectrum_json(zeta_spectrum);
        for (double s : parse_sweep(zeta_sigma)) {
          const std::complex<double> xi = ruelle_xi(spec, s);
          const std::complex<double> R = std::exp(xi);
          table.rows.push_back(
              {fmt(s), "0", fmt(xi.real()), fmt(xi.imag()), fmt(R.real()), fmt(R.imag())});
          plot.emplace_back(s, R.real());
        }
      }
    } else if (fried->parsed()) {
      table.header = {"theta", "R0", "T2", "residual"};
      for (double theta : parse_sweep(fried_theta)) {
        const FriedCheck f = fried_check_circle(theta);
        table.rows.push_back({fmt(theta), fmt(f.r_at_0), fmt(f.t_squared), fmt(f.residual)});
        plot.emplace_back(theta, f.residual);
      }
    } else if (validate->parsed()) {
      table.header = {"check", "residual", "tolerance", "pass"};
      bool all_pass = true;
      for (const CheckResult& c : run_validation_suite(val_seed)) {
        table.rows.push_back({c.name, fmt(c.residual), fmt(c.tolerance), c.pass ? "1" : "0"});
        all_pass = all_pass && c.pass;
      }
      write_output(table, out_path, out);
      write_plot(plot, plot_path);
      return all_pass ? 0 : 1;
    }

    write_output(table, out_path, out);
    write_plot(plot, plot_path);
    return 0;
  } catch (const QuadratureNotConverged& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const DivergentRegion& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace orbitalis
