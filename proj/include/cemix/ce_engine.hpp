#pragma once

#include <cstddef>
#include <vector>

#include "cemix/kernels.hpp"
#include "cemix/model.hpp"
#include "cemix/tilt_mixture.hpp"

namespace cemix {

struct CeConfig {
  std::size_t pilot_size = 10000;
  std::size_t iterations = 5;
  double weight_floor = 1e-4;
  /// Fewer positive-payoff pilot samples than this marks the iteration as unreliable.
  std::size_t degenerate_threshold = 10;
};

/// Single-component update: the payoff- and likelihood-weighted pilot mean.
/// Throws DegenerateUpdate when no sample carries positive weight.
std::vector<double> basic_update(const PilotEvaluation& eval);

struct MixtureUpdate {
  MixtureParam theta;
  /// Components whose weighted mass vanished and kept their previous tilt.
  std::vector<bool> kept_previous;
};

/// CE-EM mixture update. Weights are the posterior-weighted payoff mass shares;
/// tilts are the posterior-weighted means. `weight_floor == 0` returns the raw
/// EM weights. Throws DegenerateUpdate (iteration index `iteration`) when the
/// total mass is zero.
MixtureUpdate mixture_update(const PilotEvaluation& eval, const MixtureParam& prev,
                             double weight_floor, std::size_t iteration = 0);

/// Only the tilts are updated; weights are copied from `prev`.
MixtureUpdate tilt_update(const PilotEvaluation& eval, const MixtureParam& prev,
                          std::size_t iteration = 0);

/// (1/N) sum_k V(X_k) l(X_k) log h_theta(X_k).
double surrogate_objective(const PilotEvaluation& eval, const MixtureParam& theta);

struct CeIterationRecord {
  std::size_t iteration = 0;
  MixtureParam theta;           // parameter the pilot batch was drawn from
  double objective_before = 0;  // J(theta) on that batch
  double objective_after = 0;   // J(updated theta), pre-floor
  std::size_t positive_count = 0;
  bool low_positive = false;
  std::vector<bool> kept_previous;
};

struct CeResult {
  MixtureParam theta;
  std::vector<CeIterationRecord> trace;

  bool any_low_positive() const;
};

/// Runs cfg.iterations rounds of {draw pilot from h_theta, evaluate, update}.
/// Iteration i uses stream.at(Phase::pilot, i).
CeResult run_ce(const Model& model, const MixtureParam& theta0, const CeConfig& cfg,
                const RngStream& stream, Exec exec = Exec::parallel);

CeResult run_ce(const PayoffFn& payoff, const MixtureParam& theta0, const CeConfig& cfg,
                const RngStream& stream, Exec exec = Exec::parallel);

}  // namespace cemix
