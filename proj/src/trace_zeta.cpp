#include "orbitalis/trace_zeta.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "orbitalis/errors.hpp"
#include "orbitalis/quadrature.hpp"

namespace orbitalis {

namespace {

constexpr long kTermCap = 10000000;

const double kBernoulli[10] = {1.0 / 6.0,        -1.0 / 30.0,      1.0 / 42.0,
                               -1.0 / 30.0,      5.0 / 66.0,       -691.0 / 2730.0,
                               7.0 / 6.0,        -3617.0 / 510.0,  43867.0 / 798.0,
                               -174611.0 / 330.0};

double x_over_sinh(double x) {
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return 1.0 / (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return x / std::sinh(x);
}

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (a <= 0.0) throw PreconditionFailed("hurwitz_zeta needs a > 0");
  if (std::abs(s - 1.0) < 1e-12) throw PreconditionFailed("hurwitz_zeta pole at s = 1");
  const int N = 24;
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(k + a, -s);
  const double x = N + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(x, -s);
  // Euler-Maclaurin tail: sum_j B_{2j}/(2j)! (s)_{2j-1} x^{-s-2j+1}
  double poch = s;  // (s)_1
  double fact = 2.0;
  for (int j = 1; j <= 8; ++j) {
    sum += kBernoulli[j - 1] / fact * poch * std::pow(x, -s - 2.0 * j + 1.0);
    poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

double hurwitz_zeta_ds(double s, double a) {
  if (a <= 0.0) throw PreconditionFailed("hurwitz_zeta_ds needs a > 0");
  const int N = 24;
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += -std::log(k + a) * std::pow(k + a, -s);
  const double x = N + a;
  const double L = std::log(x);
  sum += std::pow(x, 1.0 - s) * (-L * (s - 1.0) - 1.0) / ((s - 1.0) * (s - 1.0));
  sum += -0.5 * L * std::pow(x, -s);
  // derivative of the Bernoulli tail: product rule on (s)_{2j-1} x^{-s-2j+1}
  for (int j = 1; j <= 8; ++j) {
    // pochhammer p(s) = s(s+1)...(s+2j-2) and its derivative
    double p = 1.0;
    double dp = 0.0;
    for (int i = 0; i <= 2 * j - 2; ++i) {
      dp = dp * (s + i) + p;
      p *= (s + i);
    }
    double fact = 1.0;
    for (int i = 2; i <= 2 * j; ++i) fact *= i;
    sum += kBernoulli[j - 1] / fact * (dp - p * L) * std::pow(x, -s - 2.0 * j + 1.0);
  }
  return sum;
}

void LengthSpectrum::validate() const {
  double prev = 0.0;
  for (const auto& e : entries) {
    if (e.length <= 0.0) throw InvalidModel("lengths must be positive");
    if (e.length < prev) throw InvalidModel("lengths must be sorted ascending");
    if (e.multiplicity < 1) throw InvalidModel("multiplicities must be >= 1");
    if (e.n_mult < 1) throw InvalidModel("generic multiplicity must be >= 1");
    if (e.chi_orb.second == 0) throw InvalidModel("chi_orb denominator must be nonzero");
    for (const auto& tr : e.holonomy_traces)
      if (std::abs(tr) > dim_rho + 1e-9)
        throw InvalidModel("|tr rho(gamma^k)| exceeds dim rho");
    prev = e.length;
  }
}

LengthSpectrum load_length_spectrum_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open spectrum file: " + path);
  nlohmann::json j;
  in >> j;
  LengthSpectrum spec;
  spec.dim_rho = j.value("dim_rho", 1);
  for (const auto& c : j.at("classes")) {
    LengthSpectrumEntry e;
    e.length = c.at("length").get<double>();
    e.multiplicity = c.value("multiplicity", 1);
    if (c.contains("chi_orb"))
      e.chi_orb = {c["chi_orb"][0].get<long>(), c["chi_orb"][1].get<long>()};
    e.n_mult = c.value("n", 1);
    if (c.contains("holonomy_traces"))
      for (const auto& tr : c["holonomy_traces"])
        e.holonomy_traces.emplace_back(tr[0].get<double>(), tr[1].get<double>());
    spec.entries.push_back(std::move(e));
  }
  spec.validate();
  return spec;
}

std::pair<double, double> poisson_both_sides(double t) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  double spectral = 1.0;
  for (long k = 1;; ++k) {
    if (k > kTermCap) throw QuadratureNotConverged("spectral sum hit the term cap");
    const double term = 2.0 * std::exp(-2.0 * M_PI * M_PI * k * k * t);
    spectral += term;
    if (term < 1e-18 * spectral) break;
  }
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * t);
  double geometric = norm;
  for (long k = 1;; ++k) {
    if (k > kTermCap) throw QuadratureNotConverged("geometric sum hit the term cap");
    const double term = 2.0 * norm * std::exp(-0.5 * k * k / t);
    geometric += term;
    if (term < 1e-18 * geometric) break;
  }
  return {spectral, geometric};
}

std::pair<double, double> plancherel_both_sides(double t) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  auto density_side = [&](double y) {
    return std::exp(-y * y / (2.0 * t)) * x_over_sinh(0.5 * y);
  };
  const QuadratureResult q1 = integrate_line(density_side, 4.0 * std::sqrt(t) + 8.0, 1e-13);
  const double lhs = q1.value / (t * std::sqrt(2.0 * M_PI * t));
  auto principal_side = [&](double rho) {
    return std::exp(-0.5 * t * rho * rho) * rho * std::tanh(M_PI * rho);
  };
  const QuadratureResult q2 = integrate_line(principal_side, 6.0 / std::sqrt(t) + 2.0, 1e-13);
  const double rhs = 0.5 * q2.value;
  return {lhs, rhs};
}

double plancherel_identity_residual(double t) {
  auto [lhs, rhs] = plancherel_both_sides(t);
  return std::abs(lhs - rhs);
}

double surface_heat_trace(double vol, const LengthSpectrum& spectrum, double t, int k_max) {
  if (t <= 0.0) throw PreconditionFailed("time must be positive");
  spectrum.validate();
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * t);
  std::vector<double> terms;
  for (const auto& e : spectrum.entries) {
    const double l = e.length;
    double entry_acc = 0.0;
    bool converged = false;
    for (int k = 1; k <= k_max; ++k) {
      const double term = e.multiplicity * l * norm *
                          std::exp(-0.5 * k * k * l * l / t - t / 8.0) /
                          (2.0 * std::sinh(0.5 * k * l));
      terms.push_back(term);
      entry_acc += term;
      if (term == 0.0 || term < 1e-18 * entry_acc) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw QuadratureNotConverged("geodesic power sum still significant at k_max; raise it");
  }
  const double geodesic = pairwise_sum(terms);
  auto principal = [&](double rho) {
    return std::exp(-0.5 * t * rho * rho) * rho * std::tanh(M_PI * rho);
  };
  const QuadratureResult q = integrate_line(principal, 6.0 / std::sqrt(t) + 2.0, 1e-13);
  const double identity_term = vol / (4.0 * M_PI) * std::exp(-t / 8.0) * q.value;
  return geodesic + identity_term;
}

double selberg_assemble(const LieAlgebraModel& model,
                        const std::vector<ConjugacyClassDescriptor>& classes,
                        const HeatParameters& params) {
  std::vector<double> terms;
  terms.reserve(classes.size());
  for (const auto& cls : classes)
    terms.push_back(cls.vol * heat_orbital_integral(model, cls.gamma, params).value);
  return pairwise_sum(terms);
}

double selberg_circle(double t) {
  const LieAlgebraModel line = build_abelian_model(1);
  const HeatParameters params = geometric_heat_parameters(line, t);
  Eigen::VectorXd a(1);
  a << 0.0;
  // vol(S^1) = 1 for every class
  double sum = heat_orbital_integral(line, abelian_translation(line, a), params).value;
  for (long k = 1;; ++k) {
    if (k > kTermCap) throw QuadratureNotConverged("circle class sum hit the term cap");
    a << static_cast<double>(k);
    const double pos = heat_orbital_integral(line, abelian_translation(line, a), params).value;
    a << static_cast<double>(-k);
    const double neg = heat_orbital_integral(line, abelian_translation(line, a), params).value;
    sum += pos + neg;
    if (pos + neg < 1e-18 * sum) break;
  }
  return sum;
}

TorsionResult analytic_torsion_circle(double theta) {
  const double x = theta / (2.0 * M_PI) - std::floor(theta / (2.0 * M_PI));
  if (std::min(x, 1.0 - x) < 1e-12)
    throw AcyclicityViolated("holonomy angle must avoid 2 pi Z");
  TorsionResult out;
  out.method = TorsionMethod::hurwitz_exact;
  out.error_estimate = 0.0;
  // theta(s) = zeta_{Delta_0}(s); log T = theta'(0)/2 = -log(2 |sin(theta/2)|)
  out.log_t = -std::log(2.0 * std::abs(std::sin(M_PI * x)));
  return out;
}

double circle_log_det_oracle(double theta) {
  const double x = theta / (2.0 * M_PI) - std::floor(theta / (2.0 * M_PI));
  if (std::min(x, 1.0 - x) < 1e-12)
    throw AcyclicityViolated("holonomy angle must avoid 2 pi Z");
  // zeta(s) = (2 pi)^{-2s} [zeta_H(2s, x) + zeta_H(2s, 1-x)]
  const double value0 = hurwitz_zeta(0.0, x) + hurwitz_zeta(0.0, 1.0 - x);
  const double deriv0 =
      -2.0 * std::log(2.0 * M_PI) * value0 +
      2.0 * (hurwitz_zeta_ds(0.0, x) + hurwitz_zeta_ds(0.0, 1.0 - x));
  return -deriv0;
}

TorsionResult torsion_from_eigenvalues(const std::vector<std::pair<double, double>>& spectrum) {
  for (const auto& [lam, mult] : spectrum)
    if (lam <= 0.0 || mult <= 0.0)
      throw PreconditionFailed("eigenvalues and multiplicities must be positive");
  double c0 = 0.0;
  for (const auto& [lam, mult] : spectrum) c0 += mult;
  auto h = [&](double t) {
    double s = 0.0;
    for (const auto& [lam, mult] : spectrum) s += mult * std::exp(-t * lam);
    return s;
  };
  // theta'(0) = gamma c0 + int_0^1 (h - c0) dt/t + int_1^inf h dt/t
  const QuadratureResult q1 =
      integrate([&](double t) { return (h(t) - c0) / t; }, 0.0, 1.0, 1e-12, 1e-14);
  double lam_min = spectrum.front().first;
  for (const auto& [lam, mult] : spectrum) lam_min = std::min(lam_min, lam);
  const double t_max = 1.0 + 46.0 / lam_min;
  const QuadratureResult q2 =
      integrate([&](double t) { return h(t) / t; }, 1.0, t_max, 1e-12, 1e-14);
  constexpr double kEulerGamma = 0.57721566490153286060651209;
  TorsionResult out;
  out.method = TorsionMethod::heat_mellin_approx;
  out.log_t = 0.5 * (kEulerGamma * c0 + q1.value + q2.value);
  out.error_estimate = 0.5 * (q1.abs_error + q2.abs_error);
  return out;
}

namespace {

std::complex<double> trace_power(const LengthSpectrumEntry& e, int k, int dim_rho) {
  if (e.holonomy_traces.empty()) return static_cast<double>(dim_rho);  // trivial holonomy
  if (k <= static_cast<int>(e.holonomy_traces.size()))
    return e.holonomy_traces[static_cast<size_t>(k - 1)];
  if (dim_rho == 1) return std::pow(e.holonomy_traces[0], k);  // one-dimensional: tr is a character
  throw PreconditionFailed("holonomy traces exhausted before the power tail closed");
}

}  // namespace

std::complex<double> ruelle_xi(const LengthSpectrum& spectrum, std::complex<double> sigma) {
  spectrum.validate();
  if (sigma.real() <= 0.0)
    throw DivergentRegion("sigma is at or below the growth abscissa (0 for finite spectra)");
  std::complex<double> xi = 0.0;
  for (const auto& e : spectrum.entries) {
    const double chi = static_cast<double>(e.chi_orb.first) / e.chi_orb.second;
    std::complex<double> acc = 0.0;
    for (int k = 1;; ++k) {
      if (k > kTermCap) throw QuadratureNotConverged("power sum hit the term cap");
      const std::complex<double> term = trace_power(e, k, spectrum.dim_rho) *
                                        (chi / (e.n_mult * static_cast<double>(k))) *
                                        std::exp(-sigma * (k * e.length));
      acc += term;
      if (std::abs(term) < 1e-16 * std::max(1.0, std::abs(acc))) break;
    }
    xi += static_cast<double>(e.multiplicity) * acc;
  }
  return xi;
}

std::complex<double> ruelle_r(const LengthSpectrum& spectrum, std::complex<double> sigma) {
  return std::exp(ruelle_xi(spectrum, sigma));
}

double euler_product_check(const LengthSpectrum& spectrum, std::complex<double> sigma) {
  const std::complex<double> lhs = ruelle_r(spectrum, sigma);
  std::complex<double> rhs = 1.0;
  for (const auto& e : spectrum.entries)
    rhs *= std::pow(1.0 - std::exp(-sigma * e.length), -e.multiplicity);
  return std::abs(lhs - rhs);
}

std::complex<double> ruelle_circle_r(double theta, std::complex<double> sigma) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> f1 = 1.0 - std::exp(i * theta - sigma);
  const std::complex<double> f2 = 1.0 - std::exp(-i * theta - sigma);
  return 1.0 / (f1 * f2);
}

FriedCheck fried_check_circle(double theta) {
  const double x = theta / (2.0 * M_PI) - std::floor(theta / (2.0 * M_PI));
  if (std::min(x, 1.0 - x) < 1e-12)
    throw AcyclicityViolated("Ruelle zeta has a pole at trivial holonomy");
  FriedCheck out;
  out.r_at_0 = ruelle_circle_r(theta, 0.0).real();
  const TorsionResult tor = analytic_torsion_circle(theta);
  out.t_squared = std::exp(2.0 * tor.log_t);
  out.residual = std::abs(out.r_at_0 - out.t_squared);
  return out;
}

}  // namespace orbitalis
