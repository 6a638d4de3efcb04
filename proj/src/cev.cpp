#include <cmath>

#include "cemix/errors.hpp"
#include "cemix/models.hpp"

namespace cemix {

namespace {

void check_spec(const CevSpec& s) {
  if (s.steps == 0) throw ConfigError("cev model needs at least one Euler step");
  if (!(s.gamma1 >= 0.5 && s.gamma1 <= 1.0) || !(s.gamma2 >= 0.5 && s.gamma2 <= 1.0))
    throw ConfigError("cev elasticities must lie in [0.5, 1]");
  if (!(s.rho > -1.0 && s.rho < 1.0)) throw ConfigError("cev correlation must lie in (-1, 1)");
  if (!(s.s0 > 0.0) || !(s.h0 > 0.0) || !(s.maturity > 0.0) || !(s.c1 > 0.0) || !(s.c2 > 0.0))
    throw ConfigError("cev parameters must be positive");
}

// (1 - e^{-r (1 - gamma) T}) / r, continuous at r = 0.
double decay_integral(double r, double gamma, double maturity) {
  const double k = (1.0 - gamma) * maturity;
  if (r == 0.0) return k;
  return -std::expm1(-r * k) / r;
}

// Drift that solves f(T) = target for f' = drift sigma e^{-r(1-gamma)t} f^gamma, f(0) = start.
double proxy_drift(double start, double target, double sigma, double gamma, double r,
                   double maturity) {
  return (std::pow(target, 1.0 - gamma) - std::pow(start, 1.0 - gamma)) /
         (sigma * decay_integral(r, gamma, maturity));
}

}  // namespace

CevTerminal cev_paths(const CevSpec& spec, std::span<const double> innovations) {
  const std::size_t n = spec.steps;
  if (innovations.size() != 2 * n) throw DimensionMismatch(2 * n, innovations.size());
  const double dt = spec.maturity / static_cast<double>(n);
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - spec.rho * spec.rho);
  double x = spec.s0;
  double y = spec.h0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double z = innovations[2 * i];
    const double w = spec.rho * z + rho_perp * innovations[2 * i + 1];
    // Absorbed at zero: 0^gamma = 0 switches the diffusion off.
    if (x > 0.0) {
      x += spec.sigma1 * std::exp(-spec.r * (1.0 - spec.gamma1) * t) * std::pow(x, spec.gamma1) *
           sqrt_dt * z;
      if (x < 0.0) x = 0.0;
    }
    if (y > 0.0) {
      y += spec.sigma2 * std::exp(-spec.r * (1.0 - spec.gamma2) * t) * std::pow(y, spec.gamma2) *
           sqrt_dt * w;
      if (y < 0.0) y = 0.0;
    }
  }
  const double growth = std::exp(spec.r * spec.maturity);
  return {growth * x, growth * y};
}

double payoff_cev_digital(const CevSpec& spec, std::span<const double> innovations) {
  const CevTerminal term = cev_paths(spec, innovations);
  if (std::max(spec.c1 * term.s, spec.c2 * term.h) < spec.strike) return 0.0;
  return spec.discount ? std::exp(-spec.r * spec.maturity) : 1.0;
}

double cev_drift_first(const CevSpec& spec) {
  const double target = std::exp(-spec.r * spec.maturity) * spec.strike / spec.c1;
  return proxy_drift(spec.s0, target, spec.sigma1, spec.gamma1, spec.r, spec.maturity);
}

double cev_drift_second(const CevSpec& spec) {
  const double target = std::exp(-spec.r * spec.maturity) * spec.strike / spec.c2;
  return proxy_drift(spec.h0, target, spec.sigma2, spec.gamma2, spec.r, spec.maturity);
}

std::array<std::vector<double>, 2> cev_init_tilts(const CevSpec& spec) {
  check_spec(spec);
  const std::size_t n = spec.steps;
  const double sqrt_dt = std::sqrt(spec.maturity / static_cast<double>(n));
  const double x = cev_drift_first(spec);
  const double y = cev_drift_second(spec);
  const double rho_perp = std::sqrt(1.0 - spec.rho * spec.rho);
  std::array<std::vector<double>, 2> tilts{std::vector<double>(2 * n, 0.0),
                                           std::vector<double>(2 * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    tilts[0][2 * i] = x * sqrt_dt;
    tilts[1][2 * i] = spec.rho * y * sqrt_dt;
    tilts[1][2 * i + 1] = rho_perp * y * sqrt_dt;
  }
  return tilts;
}

CevDigital::CevDigital(CevSpec spec) : spec_(spec) { check_spec(spec_); }

MixtureParam CevDigital::approx_init() const {
  const auto tilts = cev_init_tilts(spec_);
  Matrix t(2, dim());
  for (std::size_t j = 0; j < 2; ++j)
    std::copy(tilts[j].begin(), tilts[j].end(), t.row(j).begin());
  return MixtureParam::uniform(std::move(t));
}

}  // namespace cemix
