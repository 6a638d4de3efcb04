#include "cemix/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cemix/errors.hpp"

namespace cemix {

// ---------------------------------------------------------------------------
// Model defaults

std::size_t Model::rarity_components() const {
  throw EmbeddingUnavailable(name() + " has no rarity embedding");
}

void Model::rarity_statistics(std::span<const double>, std::span<double>) const {
  throw EmbeddingUnavailable(name() + " has no rarity embedding");
}

std::vector<double> Model::rarity_scales() const {
  throw EmbeddingUnavailable(name() + " has no rarity embedding");
}

double Model::payoff_delta(std::span<const double>, std::span<const double>) const {
  throw EmbeddingUnavailable(name() + " has no rarity embedding");
}

MixtureParam Model::approx_init() const {
  throw ApproxUnavailable(name() + " has no approximation initializer");
}

double rarity_embedding(const Model& model, std::span<const double> delta,
                        std::span<const double> x) {
  if (!model.has_rarity()) throw EmbeddingUnavailable(model.name() + " has no rarity embedding");
  if (delta.size() != model.rarity_components())
    throw DimensionMismatch(model.rarity_components(), delta.size());
  return model.payoff_delta(delta, x);
}

namespace {

void check_dim(std::size_t expected, std::span<const double> x) {
  if (x.size() != expected) throw DimensionMismatch(expected, x.size());
}

void check_assets(const std::vector<double>& s0, const std::vector<double>& sigma,
                  const Matrix& corr) {
  const std::size_t d = s0.size();
  if (d == 0) throw ConfigError("at least one asset is required");
  if (sigma.size() != d) throw DimensionMismatch(d, sigma.size());
  if (corr.rows() != d || corr.cols() != d) throw DimensionMismatch(d, corr.rows());
  for (std::size_t j = 0; j < d; ++j) {
    if (!(s0[j] > 0.0) || !(sigma[j] > 0.0)) throw ConfigError("prices and volatilities must be positive");
    if (std::abs(corr(j, j) - 1.0) > 1e-12) throw ConfigError("correlation diagonal must be one");
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(corr(i, j) - corr(j, i)) > 1e-12) throw ConfigError("correlation must be symmetric");
  }
}

// S_T^(j) = S0_j exp((r - sigma_j^2/2) T + sigma_j sqrt(T) (Cx)_j)
void gbm_terminal(const std::vector<double>& s0, const std::vector<double>& sigma, double r,
                  double maturity, const CholFactor& chol, std::span<const double> x,
                  std::span<double> out) {
  chol.apply(x, out);
  const double sqrt_t = std::sqrt(maturity);
  for (std::size_t j = 0; j < s0.size(); ++j)
    out[j] = s0[j] * std::exp((r - 0.5 * sigma[j] * sigma[j]) * maturity + sigma[j] * sqrt_t * out[j]);
}

// Tilt alpha = C^{-1} eta with E_alpha[S_T^(j)] = target_j for every j listed.
std::vector<double> tilt_for_means(const std::vector<double>& s0, const std::vector<double>& sigma,
                                   double r, double maturity, const CholFactor& chol,
                                   const std::vector<double>& targets) {
  std::vector<double> eta(s0.size());
  const double sqrt_t = std::sqrt(maturity);
  for (std::size_t j = 0; j < s0.size(); ++j)
    eta[j] = (std::log(targets[j] / s0[j]) - r * maturity) / (sigma[j] * sqrt_t);
  return chol.solve(eta);
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-sided tail

double payoff_two_sided(const TwoSidedTailSpec& spec, std::span<const double> x) {
  check_dim(1, x);
  return (x[0] >= spec.a || x[0] <= spec.b) ? 1.0 : 0.0;
}

TwoSidedTail::TwoSidedTail(TwoSidedTailSpec spec) : spec_(spec) {
  if (!(spec_.b < 0.0 && spec_.a > 0.0)) throw ConfigError("two-sided tail requires b < 0 < a");
}

double TwoSidedTail::payoff(std::span<const double> x) const { return payoff_two_sided(spec_, x); }

// A_1(delta) = {x >= delta a}, A_2(delta) = {x <= delta b} = {-x >= delta (-b)}.
void TwoSidedTail::rarity_statistics(std::span<const double> x, std::span<double> out) const {
  check_dim(1, x);
  out[0] = x[0];
  out[1] = -x[0];
}

std::vector<double> TwoSidedTail::rarity_scales() const { return {spec_.a, -spec_.b}; }

double TwoSidedTail::payoff_delta(std::span<const double> delta, std::span<const double> x) const {
  check_dim(1, x);
  return (x[0] >= delta[0] * spec_.a || x[0] <= delta[1] * spec_.b) ? 1.0 : 0.0;
}

MixtureParam TwoSidedTail::approx_init() const {
  return MixtureParam::uniform(Matrix{{spec_.a}, {spec_.b}});
}

double TwoSidedTail::true_value() const { return normal_cdf(-spec_.a) + normal_cdf(spec_.b); }

// ---------------------------------------------------------------------------
// Asian call

namespace {

std::vector<double> monitoring_times(const AsianSpec& spec) {
  if (spec.monitoring == 0) throw ConfigError("asian option needs at least one monitoring date");
  if (spec.times.empty()) {
    std::vector<double> t(spec.monitoring);
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = spec.maturity * static_cast<double>(i + 1) / static_cast<double>(spec.monitoring);
    return t;
  }
  if (spec.times.size() != spec.monitoring) throw DimensionMismatch(spec.monitoring, spec.times.size());
  double prev = 0.0;
  for (double t : spec.times) {
    if (!(t > prev)) throw ConfigError("monitoring dates must be increasing and positive");
    prev = t;
  }
  return spec.times;
}

double asian_average(double s0, double r, double sigma, std::span<const double> times,
                     std::span<const double> sqrt_dt, std::span<const double> x) {
  double w = 0.0;
  double sum = 0.0;
  const double drift = r - 0.5 * sigma * sigma;
  for (std::size_t i = 0; i < times.size(); ++i) {
    w += sqrt_dt[i] * x[i];
    sum += s0 * std::exp(drift * times[i] + sigma * w);
  }
  return sum / static_cast<double>(times.size());
}

std::vector<double> increments_sqrt(std::span<const double> times) {
  std::vector<double> out(times.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = std::sqrt(times[i] - prev);
    prev = times[i];
  }
  return out;
}

}  // namespace

AsianCall::AsianCall(AsianSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.s0 > 0.0) || !(spec_.sigma >= 0.0) || !(spec_.maturity > 0.0))
    throw ConfigError("asian option parameters out of range");
  times_ = monitoring_times(spec_);
  sqrt_dt_ = increments_sqrt(times_);
}

double AsianCall::payoff(std::span<const double> x) const {
  check_dim(dim(), x);
  const double avg = asian_average(spec_.s0, spec_.r, spec_.sigma, times_, sqrt_dt_, x);
  return std::exp(-spec_.r * spec_.maturity) * std::max(avg - spec_.strike, 0.0);
}

double AsianCall::mean_average_price(double a) const {
  std::vector<double> shifted(dim(), a);
  return asian_average(spec_.s0, spec_.r, spec_.sigma, times_, sqrt_dt_, shifted);
}

MixtureParam AsianCall::approx_init() const {
  const auto g = [this](double a) { return mean_average_price(a) - spec_.strike; };
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 60 && g(lo) > 0.0; ++i) lo *= 2.0;
  for (int i = 0; i < 60 && g(hi) < 0.0; ++i) hi *= 2.0;
  const double a = bisect_root(g, lo, hi, 1e-10);
  std::vector<double> alpha(dim(), a);
  return MixtureParam::single(alpha);
}

double payoff_asian(const AsianSpec& spec, std::span<const double> x) {
  return AsianCall(spec).payoff(x);
}

// ---------------------------------------------------------------------------
// Rainbow (outperformance)

RainbowOption::RainbowOption(RainbowSpec spec) : spec_(std::move(spec)) {
  check_assets(spec_.s0, spec_.sigma, spec_.correlation);
  chol_ = cholesky(spec_.correlation);
}

void RainbowOption::terminal_prices(std::span<const double> x, std::span<double> out) const {
  check_dim(dim(), x);
  gbm_terminal(spec_.s0, spec_.sigma, spec_.r, spec_.maturity, chol_, x, out);
}

double RainbowOption::payoff(std::span<const double> x) const {
  const std::vector<double> ones(dim(), 1.0);
  return payoff_delta(ones, x);
}

void RainbowOption::rarity_statistics(std::span<const double> x, std::span<double> out) const {
  terminal_prices(x, out);
}

std::vector<double> RainbowOption::rarity_scales() const {
  return std::vector<double>(dim(), spec_.strike);
}

// (max_j [e^{-rT} S_T^(j) - e^{-rT} delta_j K])^+. Positivity of the bracket for
// some j is exactly membership in A_j(delta_j), so the set indicator is implied.
double RainbowOption::payoff_delta(std::span<const double> delta, std::span<const double> x) const {
  check_dim(dim(), x);
  const std::size_t d = dim();
  double cx[64];
  std::vector<double> heap;
  std::span<double> prices(cx, d);
  if (d > 64) {
    heap.resize(d);
    prices = heap;
  }
  terminal_prices(x, prices);
  const double disc = std::exp(-spec_.r * spec_.maturity);
  double best = 0.0;
  for (std::size_t j = 0; j < d; ++j) best = std::max(best, disc * (prices[j] - delta[j] * spec_.strike));
  return best;
}

MixtureParam RainbowOption::approx_init() const {
  const std::size_t d = dim();
  Matrix tilts(d, d);
  const double sqrt_t = std::sqrt(spec_.maturity);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> eta(d, 0.0);
    eta[j] = (std::log(spec_.strike / spec_.s0[j]) - spec_.r * spec_.maturity) / (spec_.sigma[j] * sqrt_t);
    const auto alpha = chol_.solve(eta);
    std::copy(alpha.begin(), alpha.end(), tilts.row(j).begin());
  }
  return MixtureParam::uniform(std::move(tilts));
}

// ---------------------------------------------------------------------------
// Pyramid

PyramidOption::PyramidOption(PyramidSpec spec) : spec_(std::move(spec)) {
  check_assets(spec_.s0, spec_.sigma, spec_.correlation);
  if (spec_.asset_strikes.size() != spec_.s0.size())
    throw DimensionMismatch(spec_.s0.size(), spec_.asset_strikes.size());
  if (spec_.s0.size() > kMaxPyramidAssets)
    throw ConfigError("pyramid option supports at most " + std::to_string(kMaxPyramidAssets) +
                      " assets");
  chol_ = cholesky(spec_.correlation);
}

void PyramidOption::terminal_prices(std::span<const double> x, std::span<double> out) const {
  check_dim(dim(), x);
  gbm_terminal(spec_.s0, spec_.sigma, spec_.r, spec_.maturity, chol_, x, out);
}

double PyramidOption::payoff(std::span<const double> x) const {
  double buf[kMaxPyramidAssets];
  std::span<double> prices(buf, dim());
  terminal_prices(x, prices);
  double s = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) s += std::abs(prices[j] - spec_.asset_strikes[j]);
  return std::exp(-spec_.r * spec_.maturity) * std::max(s - spec_.strike, 0.0);
}

std::vector<double> PyramidOption::approx_targets(std::size_t pattern) const {
  const std::size_t d = dim();
  const double growth = std::exp(spec_.r * spec_.maturity);
  std::vector<double> kbar(d);
  double gap = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    kbar[j] = std::max(spec_.asset_strikes[j], spec_.s0[j] * growth);
    gap += std::abs(kbar[j] - spec_.asset_strikes[j]);
  }
  const double shift = std::max(spec_.strike - gap, 0.0) / static_cast<double>(d);
  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) {
    const bool below = (pattern >> j) & 1u;
    x[j] = below ? kbar[j] - shift : kbar[j] + shift;
    // A "below" target can cross zero for very large K; keep the log finite.
    if (x[j] <= 0.0) x[j] = 1e-3 * kbar[j];
  }
  return x;
}

MixtureParam PyramidOption::approx_init() const {
  const std::size_t d = dim();
  const std::size_t m = natural_components();
  Matrix tilts(m, d);
  for (std::size_t p = 0; p < m; ++p) {
    const auto alpha = tilt_for_means(spec_.s0, spec_.sigma, spec_.r, spec_.maturity, chol_,
                                      approx_targets(p));
    std::copy(alpha.begin(), alpha.end(), tilts.row(p).begin());
  }
  return MixtureParam::uniform(std::move(tilts));
}

}  // namespace cemix
