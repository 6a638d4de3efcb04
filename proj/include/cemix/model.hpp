#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cemix/tilt_mixture.hpp"

namespace cemix {

/// An expectation problem E[V(X)], X ~ N(0, I_d).
///
/// Models may additionally expose a rarity embedding V_delta together with
/// per-component statistics s_j and scales c_j such that the j-th target set
/// is A_j(delta) = { s_j(x) >= delta * c_j }, and an analytical initializer.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  /// Discounted payoff V(x) >= 0.
  virtual double payoff(std::span<const double> x) const = 0;
  /// Number of mixture components suggested by the payoff geometry.
  virtual std::size_t natural_components() const { return 1; }

  virtual bool has_rarity() const { return false; }
  virtual std::size_t rarity_components() const;
  virtual void rarity_statistics(std::span<const double> x, std::span<double> out) const;
  virtual std::vector<double> rarity_scales() const;
  virtual double payoff_delta(std::span<const double> delta, std::span<const double> x) const;

  virtual bool has_approx() const { return false; }
  virtual MixtureParam approx_init() const;
};

/// V_delta(x); throws EmbeddingUnavailable for models without an embedding.
double rarity_embedding(const Model& model, std::span<const double> delta,
                        std::span<const double> x);

}  // namespace cemix
