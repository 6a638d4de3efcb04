#include "cemix/ce_engine.hpp"

#include <algorithm>

#include "cemix/errors.hpp"

namespace cemix {

namespace {

struct ComponentSums {
  std::vector<double> mass;  // sum_k V l post_j
  Matrix first;              // sum_k V l post_j X_k, m x d
  double total = 0.0;
};

ComponentSums component_sums(const PilotEvaluation& eval) {
  const std::size_t m = eval.components();
  const std::size_t d = eval.samples.dim();
  std::vector<NeumaierSum> mass(m);
  std::vector<NeumaierSum> first(m * d);
  for (std::size_t k = 0; k < eval.size(); ++k) {
    const double base = eval.payoff[k] * eval.lr[k];
    if (base == 0.0) continue;
    const auto post = eval.posteriors.row(k);
    const auto x = eval.samples.x.row(k);
    for (std::size_t j = 0; j < m; ++j) {
      const double c = base * post[j];
      mass[j].add(c);
      for (std::size_t i = 0; i < d; ++i) first[j * d + i].add(c * x[i]);
    }
  }
  ComponentSums out{std::vector<double>(m), Matrix(m, d), 0.0};
  for (std::size_t j = 0; j < m; ++j) {
    out.mass[j] = mass[j].value();
    out.total += out.mass[j];
    for (std::size_t i = 0; i < d; ++i) out.first(j, i) = first[j * d + i].value();
  }
  return out;
}

// Weighted means per component, keeping the previous tilt where the mass vanished.
Matrix weighted_tilts(const ComponentSums& sums, const MixtureParam& prev,
                      std::vector<bool>& kept_previous) {
  const std::size_t m = prev.components();
  const std::size_t d = prev.dim();
  Matrix tilts(m, d);
  kept_previous.assign(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    if (sums.mass[j] > 0.0) {
      for (std::size_t i = 0; i < d; ++i) tilts(j, i) = sums.first(j, i) / sums.mass[j];
    } else {
      kept_previous[j] = true;
      std::copy(prev.tilt(j).begin(), prev.tilt(j).end(), tilts.row(j).begin());
    }
  }
  return tilts;
}

void check_eval(const PilotEvaluation& eval, const MixtureParam& prev) {
  if (eval.components() != prev.components())
    throw DimensionMismatch(prev.components(), eval.components());
  if (eval.samples.dim() != prev.dim()) throw DimensionMismatch(prev.dim(), eval.samples.dim());
}

}  // namespace

std::vector<double> basic_update(const PilotEvaluation& eval) {
  const std::size_t d = eval.samples.dim();
  NeumaierSum mass;
  std::vector<NeumaierSum> first(d);
  for (std::size_t k = 0; k < eval.size(); ++k) {
    const double c = eval.payoff[k] * eval.lr[k];
    if (c == 0.0) continue;
    mass.add(c);
    const auto x = eval.samples.x.row(k);
    for (std::size_t i = 0; i < d; ++i) first[i].add(c * x[i]);
  }
  const double total = mass.value();
  if (!(total > 0.0)) throw DegenerateUpdate(0);
  std::vector<double> alpha(d);
  for (std::size_t i = 0; i < d; ++i) alpha[i] = first[i].value() / total;
  return alpha;
}

MixtureUpdate mixture_update(const PilotEvaluation& eval, const MixtureParam& prev,
                             double weight_floor, std::size_t iteration) {
  check_eval(eval, prev);
  const ComponentSums sums = component_sums(eval);
  if (!(sums.total > 0.0)) throw DegenerateUpdate(iteration);

  MixtureUpdate out;
  Matrix tilts = weighted_tilts(sums, prev, out.kept_previous);
  std::vector<double> weights(prev.components());
  for (std::size_t j = 0; j < weights.size(); ++j) weights[j] = sums.mass[j] / sums.total;
  apply_weight_floor(weights, weight_floor);
  out.theta = MixtureParam(std::move(weights), std::move(tilts));
  return out;
}

MixtureUpdate tilt_update(const PilotEvaluation& eval, const MixtureParam& prev,
                          std::size_t iteration) {
  check_eval(eval, prev);
  const ComponentSums sums = component_sums(eval);
  if (!(sums.total > 0.0)) throw DegenerateUpdate(iteration);
  MixtureUpdate out;
  Matrix tilts = weighted_tilts(sums, prev, out.kept_previous);
  out.theta = MixtureParam(prev.weights, std::move(tilts));
  return out;
}

double surrogate_objective(const PilotEvaluation& eval, const MixtureParam& theta) {
  if (eval.size() == 0) return 0.0;
  NeumaierSum s;
  for (std::size_t k = 0; k < eval.size(); ++k) {
    const double c = eval.payoff[k] * eval.lr[k];
    if (c == 0.0) continue;
    s.add(c * log_mixture_density(theta, eval.samples.x.row(k)));
  }
  return s.value() / static_cast<double>(eval.size());
}

bool CeResult::any_low_positive() const {
  return std::any_of(trace.begin(), trace.end(), [](const auto& r) { return r.low_positive; });
}

CeResult run_ce(const Model& model, const MixtureParam& theta0, const CeConfig& cfg,
                const RngStream& stream, Exec exec) {
  if (theta0.dim() != model.dim()) throw DimensionMismatch(model.dim(), theta0.dim());
  return run_ce([&model](std::span<const double> x) { return model.payoff(x); }, theta0, cfg,
                stream, exec);
}

CeResult run_ce(const PayoffFn& payoff, const MixtureParam& theta0, const CeConfig& cfg,
                const RngStream& stream, Exec exec) {
  theta0.validate();
  CeResult result{theta0, {}};
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const RngStream st = stream.at(Phase::pilot, static_cast<std::uint32_t>(it));
    const PilotEvaluation eval = evaluate_pilot(payoff, result.theta, cfg.pilot_size, st, exec);

    CeIterationRecord rec;
    rec.iteration = it;
    rec.theta = result.theta;
    rec.positive_count = eval.positive_count();
    rec.low_positive = rec.positive_count < cfg.degenerate_threshold;
    if (rec.positive_count == 0) throw DegenerateUpdate(it);

    MixtureUpdate raw = mixture_update(eval, result.theta, 0.0, it);
    rec.objective_before = surrogate_objective(eval, result.theta);
    rec.objective_after = surrogate_objective(eval, raw.theta);
    rec.kept_previous = raw.kept_previous;

    apply_weight_floor(raw.theta.weights, cfg.weight_floor);
    result.theta = std::move(raw.theta);
    result.trace.push_back(std::move(rec));
  }
  return result;
}

}  // namespace cemix
