#pragma once

// Payoff models on standard-normal input spaces.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cemix/math_core.hpp"
#include "cemix/model.hpp"

namespace cemix {

// ---------------------------------------------------------------------------
// P{X >= a or X <= b}, X ~ N(0, 1)

struct TwoSidedTailSpec {
  double a = 1.0;
  double b = -1.5;
};

double payoff_two_sided(const TwoSidedTailSpec& spec, std::span<const double> x);

class TwoSidedTail final : public Model {
 public:
  explicit TwoSidedTail(TwoSidedTailSpec spec);

  std::string name() const override { return "two_sided_tail"; }
  std::size_t dim() const override { return 1; }
  double payoff(std::span<const double> x) const override;
  std::size_t natural_components() const override { return 2; }

  bool has_rarity() const override { return true; }
  std::size_t rarity_components() const override { return 2; }
  void rarity_statistics(std::span<const double> x, std::span<double> out) const override;
  std::vector<double> rarity_scales() const override;
  double payoff_delta(std::span<const double> delta, std::span<const double> x) const override;

  bool has_approx() const override { return true; }
  MixtureParam approx_init() const override;

  /// Exact value Phi(b) + Phi(-a).
  double true_value() const;
  const TwoSidedTailSpec& spec() const { return spec_; }

 private:
  TwoSidedTailSpec spec_;
};

// ---------------------------------------------------------------------------
// Discretely monitored arithmetic-average call under Black-Scholes.

struct AsianSpec {
  double s0 = 50.0;
  double r = 0.05;
  double sigma = 0.3;
  double maturity = 1.0;
  std::size_t monitoring = 30;
  std::vector<double> times;  // empty: uniform t_i = i T / d
  double strike = 50.0;
};

class AsianCall final : public Model {
 public:
  explicit AsianCall(AsianSpec spec);

  std::string name() const override { return "asian_call"; }
  std::size_t dim() const override { return spec_.monitoring; }
  double payoff(std::span<const double> x) const override;

  bool has_approx() const override { return true; }
  /// Common shift a in every coordinate with E_a[average price] = K.
  MixtureParam approx_init() const override;

  /// Average of the monitored prices when every Z_i is shifted by `a` and the
  /// noise is switched off, i.e. the right-hand side of the strike equation.
  double mean_average_price(double a) const;

  const AsianSpec& spec() const { return spec_; }
  std::span<const double> times() const { return times_; }

 private:
  AsianSpec spec_;
  std::vector<double> times_;
  std::vector<double> sqrt_dt_;
};

double payoff_asian(const AsianSpec& spec, std::span<const double> x);

// ---------------------------------------------------------------------------
// Outperformance option (max_j S_T^(j) - K)^+ on correlated GBMs.

struct RainbowSpec {
  std::vector<double> s0;
  std::vector<double> sigma;
  Matrix correlation;
  double r = 0.03;
  double maturity = 1.0;
  double strike = 60.0;
};

class RainbowOption final : public Model {
 public:
  explicit RainbowOption(RainbowSpec spec);

  std::string name() const override { return "rainbow"; }
  std::size_t dim() const override { return spec_.s0.size(); }
  double payoff(std::span<const double> x) const override;
  std::size_t natural_components() const override { return dim(); }

  bool has_rarity() const override { return true; }
  std::size_t rarity_components() const override { return dim(); }
  /// Terminal prices Y^(j).
  void rarity_statistics(std::span<const double> x, std::span<double> out) const override;
  std::vector<double> rarity_scales() const override;
  double payoff_delta(std::span<const double> delta, std::span<const double> x) const override;

  bool has_approx() const override { return true; }
  MixtureParam approx_init() const override;

  void terminal_prices(std::span<const double> x, std::span<double> out) const;
  const RainbowSpec& spec() const { return spec_; }
  const CholFactor& chol() const { return chol_; }

 private:
  RainbowSpec spec_;
  CholFactor chol_;
};

// ---------------------------------------------------------------------------
// Pyramid option (sum_j |S_T^(j) - K_j| - K)^+, discounted.

struct PyramidSpec {
  std::vector<double> s0;
  std::vector<double> sigma;
  std::vector<double> asset_strikes;
  Matrix correlation;
  double r = 0.03;
  double maturity = 1.0;
  double strike = 30.0;
};

inline constexpr std::size_t kMaxPyramidAssets = 10;

class PyramidOption final : public Model {
 public:
  explicit PyramidOption(PyramidSpec spec);

  std::string name() const override { return "pyramid"; }
  std::size_t dim() const override { return spec_.s0.size(); }
  double payoff(std::span<const double> x) const override;
  std::size_t natural_components() const override { return std::size_t{1} << dim(); }

  bool has_approx() const override { return true; }
  /// One tilt per sign pattern; bit j of the component index selects the
  /// "S_T^(j) <= K_j" side.
  MixtureParam approx_init() const override;
  /// Target mean prices x_j for sign pattern `pattern`.
  std::vector<double> approx_targets(std::size_t pattern) const;

  void terminal_prices(std::span<const double> x, std::span<double> out) const;
  const PyramidSpec& spec() const { return spec_; }

 private:
  PyramidSpec spec_;
  CholFactor chol_;
};

// ---------------------------------------------------------------------------
// Digital call on the larger of two CEV assets, Euler-discretised.

struct CevSpec {
  double s0 = 50.0;
  double h0 = 48.0;
  double sigma1 = 0.3;
  double sigma2 = 0.35;
  double gamma1 = 0.5;
  double gamma2 = 0.7;
  double rho = 0.3;
  double r = 0.03;
  double maturity = 1.0;
  double strike = 60.0;
  double c1 = 1.0;
  double c2 = 1.0;
  std::size_t steps = 50;
  bool discount = true;  // multiply the indicator by e^{-rT}
};

struct CevTerminal {
  double s;
  double h;
};

/// Innovations are packed (Z_1, R_1, ..., Z_n, R_n).
CevTerminal cev_paths(const CevSpec& spec, std::span<const double> innovations);
double payoff_cev_digital(const CevSpec& spec, std::span<const double> innovations);
/// Drift x of W that makes the deterministic mean proxy of the discounted
/// first asset hit e^{-rT} K / c1 at maturity.
double cev_drift_first(const CevSpec& spec);
/// Same construction for B and the second asset.
double cev_drift_second(const CevSpec& spec);
/// Two innovation-space mean shifts (W drift x; B drift y).
std::array<std::vector<double>, 2> cev_init_tilts(const CevSpec& spec);

class CevDigital final : public Model {
 public:
  explicit CevDigital(CevSpec spec);

  std::string name() const override { return "cev_digital"; }
  std::size_t dim() const override { return 2 * spec_.steps; }
  double payoff(std::span<const double> x) const override { return payoff_cev_digital(spec_, x); }
  std::size_t natural_components() const override { return 2; }

  bool has_approx() const override { return true; }
  MixtureParam approx_init() const override;

  const CevSpec& spec() const { return spec_; }

 private:
  CevSpec spec_;
};

}  // namespace cemix
