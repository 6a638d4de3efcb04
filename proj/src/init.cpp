#include "cemix/init.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cemix/ce_engine.hpp"
#include "cemix/errors.hpp"

namespace cemix {

namespace {

bool tilts_distinct(const Matrix& tilts) {
  for (std::size_t i = 0; i < tilts.rows(); ++i)
    for (std::size_t j = i + 1; j < tilts.rows(); ++j)
      if (std::equal(tilts.row(i).begin(), tilts.row(i).end(), tilts.row(j).begin())) return false;
  return true;
}

}  // namespace

MixtureParam init_perturbation(std::size_t m, std::span<const double> base, double scale,
                               const RngStream& stream) {
  if (m == 0) throw std::invalid_argument("component count must be positive");
  if (!(scale >= 0.0)) throw std::invalid_argument("perturbation scale must be nonnegative");
  const std::size_t d = base.size();
  Matrix tilts(m, d);
  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < d; ++i) {
        const double u = stream.uniform(attempt * m + j, static_cast<std::uint32_t>(i));
        tilts(j, i) = base[i] + scale * (2.0 * u - 1.0);
      }
    if (tilts_distinct(tilts)) return MixtureParam::uniform(std::move(tilts));
  }
  throw std::invalid_argument("could not draw pairwise distinct tilts; increase the scale");
}

std::size_t RarityConfig::threshold_count(std::size_t m) const {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rarity fraction must lie in (0, 1)");
  const auto n0 = static_cast<std::size_t>(std::floor(static_cast<double>(pilot_size) * rho /
                                                      static_cast<double>(m)));
  if (n0 < 1) throw ConfigError("rarity threshold count N*rho/m is zero");
  return n0;
}

std::vector<double> rarity_delta(const Matrix& statistics, std::span<const double> scales,
                                 std::size_t n0, std::span<const double> prev) {
  const std::size_t n = statistics.rows();
  const std::size_t m = statistics.cols();
  if (scales.size() != m) throw DimensionMismatch(m, scales.size());
  if (prev.size() != m) throw DimensionMismatch(m, prev.size());
  if (n0 < 1 || n0 > n) throw RankOutOfRange("threshold count outside 1..N");
  std::vector<double> column(n);
  std::vector<double> delta(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) column[k] = statistics(k, j);
    delta[j] = std::max(order_statistic(column, n - n0 + 1) / scales[j], prev[j]);
  }
  return delta;
}

std::array<double, 2> rarity_delta_two_sided(std::span<const double> samples, double a, double b,
                                             std::size_t n0, std::array<double, 2> prev_delta) {
  Matrix stats(samples.size(), 2);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    stats(k, 0) = samples[k];
    stats(k, 1) = -samples[k];
  }
  const std::array<double, 2> scales{a, -b};
  const auto d = rarity_delta(stats, scales, n0, prev_delta);
  return {d[0], d[1]};
}

std::vector<double> rarity_delta_rainbow(const Matrix& prices, double strike, std::size_t n0,
                                         std::span<const double> prev_delta) {
  const std::vector<double> scales(prices.cols(), strike);
  return rarity_delta(prices, scales, n0, prev_delta);
}

RarityResult init_rarity_ce(const Model& model, const RarityConfig& cfg,
                            const MixtureParam& theta_start, const RngStream& stream, Exec exec) {
  if (!model.has_rarity()) throw EmbeddingUnavailable(model.name() + " has no rarity embedding");
  theta_start.validate();
  const std::size_t m = model.rarity_components();
  if (theta_start.components() != m) throw DimensionMismatch(m, theta_start.components());
  if (theta_start.dim() != model.dim()) throw DimensionMismatch(model.dim(), theta_start.dim());
  for (double w : theta_start.weights)
    if (std::abs(w - 1.0 / static_cast<double>(m)) > 1e-12)
      throw std::invalid_argument("rarity initialization starts from equal weights");

  const std::size_t n0 = cfg.threshold_count(m);
  const std::vector<double> scales = model.rarity_scales();
  RarityResult result{theta_start, {}};
  std::vector<double> delta(m, 0.0);

  for (std::size_t stage = 0; stage < cfg.max_stages; ++stage) {
    const RngStream st = stream.at(Phase::init, static_cast<std::uint32_t>(stage));
    SampleBatch batch = draw_batch(result.theta, cfg.pilot_size, st, exec);

    Matrix stats(batch.size(), m);
    for_each_index(batch.size(), exec,
                   [&](std::size_t k) { model.rarity_statistics(batch.x.row(k), stats.row(k)); });
    delta = rarity_delta(stats, scales, n0, delta);

    RarityStage rec;
    rec.stage = stage;
    rec.delta = delta;
    rec.in_set.assign(m, 0);
    for (std::size_t k = 0; k < stats.rows(); ++k)
      for (std::size_t j = 0; j < m; ++j)
        if (stats(k, j) >= delta[j] * scales[j]) ++rec.in_set[j];

    const PayoffFn v_delta = [&model, &delta](std::span<const double> x) {
      return model.payoff_delta(delta, x);
    };
    const PilotEvaluation eval = evaluate_batch(v_delta, result.theta, std::move(batch), exec);
    MixtureUpdate upd = cfg.adaptive_weights ? mixture_update(eval, result.theta, cfg.min_weight, stage)
                                             : tilt_update(eval, result.theta, stage);
    result.theta = std::move(upd.theta);
    rec.theta = result.theta;
    result.stages.push_back(std::move(rec));

    if (std::all_of(delta.begin(), delta.end(), [](double v) { return v >= 1.0; })) return result;
  }
  throw StagnantRarity(cfg.max_stages);
}

MixtureParam init_approx(const Model& model) {
  if (!model.has_approx()) throw ApproxUnavailable(model.name() + " has no approximation initializer");
  return model.approx_init();
}

}  // namespace cemix
