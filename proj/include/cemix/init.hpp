#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cemix/kernels.hpp"
#include "cemix/model.hpp"
#include "cemix/tilt_mixture.hpp"

namespace cemix {

/// Equal weights; tilt j is base + U[-scale, scale]^d, redrawn until all tilts differ.
MixtureParam init_perturbation(std::size_t m, std::span<const double> base, double scale,
                               const RngStream& stream);

struct RarityConfig {
  double rho = 0.05;
  std::size_t pilot_size = 10000;
  std::size_t max_stages = 50;
  /// Let the weights adapt during the stages, but never below `min_weight`.
  bool adaptive_weights = false;
  double min_weight = 0.05;

  /// floor(N rho / m); throws ConfigError when it is zero.
  std::size_t threshold_count(std::size_t m) const;
};

struct RarityStage {
  std::size_t stage = 0;
  std::vector<double> delta;
  MixtureParam theta;                // parameter after the stage update
  std::vector<std::size_t> in_set;   // #{k : X_k in A_j(delta_j)}
};

struct RarityResult {
  MixtureParam theta;
  std::vector<RarityStage> stages;
};

/// Generic rarity update: for component j, the largest delta such that at least
/// n0 samples satisfy s_j(X_k) >= delta * c_j, floored at prev[j].
/// `statistics` is N x m, `scales` the c_j > 0.
std::vector<double> rarity_delta(const Matrix& statistics, std::span<const double> scales,
                                 std::size_t n0, std::span<const double> prev);

std::array<double, 2> rarity_delta_two_sided(std::span<const double> samples, double a, double b,
                                             std::size_t n0, std::array<double, 2> prev_delta);

/// `prices` is N x d, column j holding Y^(j).
std::vector<double> rarity_delta_rainbow(const Matrix& prices, double strike, std::size_t n0,
                                         std::span<const double> prev_delta);

/// Stagewise CE initialization over the model's rarity embedding. Stage i draws
/// its pilot from stream.at(Phase::init, i). The start parameter must have
/// equal weights. Throws StagnantRarity after cfg.max_stages stages.
RarityResult init_rarity_ce(const Model& model, const RarityConfig& cfg,
                            const MixtureParam& theta_start, const RngStream& stream,
                            Exec exec = Exec::parallel);

/// The model's analytical initializer; throws ApproxUnavailable.
MixtureParam init_approx(const Model& model);

}  // namespace cemix
