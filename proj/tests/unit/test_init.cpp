#include <doctest.h>

#include <numeric>

#include "cemix/errors.hpp"
#include "cemix/init.hpp"
#include "cemix/models.hpp"

using namespace cemix;

TEST_CASE("perturbation") {
  const std::vector<double> base{0.0};
  const auto one = init_perturbation(1, base, 0.0, RngStream{1});
  CHECK(one.weights == std::vector<double>{1.0});
  CHECK(one.tilts(0, 0) == 0.0);

  const auto two = init_perturbation(2, base, 0.1, RngStream{1});
  CHECK(two.weights == std::vector<double>{0.5, 0.5});
  CHECK(std::abs(two.tilts(0, 0)) <= 0.1);
  CHECK(std::abs(two.tilts(1, 0)) <= 0.1);
  CHECK(two.tilts(0, 0) != two.tilts(1, 0));

  const std::vector<double> b3{1.0, -1.0, 0.5};
  const auto many = init_perturbation(8, b3, 0.2, RngStream{9});
  for (double w : many.weights) CHECK(w == 0.125);
  CHECK(many.min_tilt_separation() > 0.0);

  CHECK_THROWS(init_perturbation(2, base, 0.0, RngStream{1}));
}

TEST_CASE("rarity threshold count") {
  RarityConfig cfg;
  cfg.pilot_size = 20000;
  CHECK(cfg.threshold_count(2) == 500);
  cfg.pilot_size = 10;
  CHECK_THROWS_AS(cfg.threshold_count(2), ConfigError);
}

TEST_CASE("two-sided rarity update") {
  std::vector<double> s(100);
  std::iota(s.begin(), s.end(), 1.0);
  const auto d = rarity_delta_two_sided(s, 100.0, -1.0, 10, {0.0, 0.0});
  CHECK(d[0] == doctest::Approx(0.91));
  CHECK(d[1] == 0.0);  // X_(10) / b is negative
  const auto clamped = rarity_delta_two_sided(s, 100.0, -1.0, 10, {1.0, 11.0});
  CHECK(clamped[0] == 1.0);
  CHECK(clamped[1] == 11.0);

  const std::vector<double> mid{-0.5, 0.0, 0.5};
  const auto same = rarity_delta_two_sided(mid, 2.0, -2.0, 1, {0.4, 0.4});
  CHECK(same[0] == 0.4);
  CHECK(same[1] == 0.4);
}

TEST_CASE("rainbow rarity update") {
  const std::size_t n = 1000;
  Matrix prices(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    prices(k, 0) = double(k + 1);
    prices(k, 1) = double(n - k);
  }
  const std::vector<double> zero{0.0, 0.0};
  const auto d = rarity_delta_rainbow(prices, double(n), 10, zero);
  CHECK(d[0] == doctest::Approx(double(n - 9) / n));
  CHECK(d[1] == doctest::Approx(double(n - 9) / n));
  const auto all = rarity_delta_rainbow(prices, double(n), n, zero);
  CHECK(all[0] == doctest::Approx(1.0 / n));
  const std::vector<double> hi{2.0, 0.0};
  CHECK(rarity_delta_rainbow(prices, double(n), n, hi)[0] == 2.0);
}

TEST_CASE("rarity initialization on the two-sided tail") {
  const TwoSidedTail model({2.0, -2.5});
  RarityConfig cfg;
  cfg.pilot_size = 20000;
  const auto res = init_rarity_ce(model, cfg, MixtureParam::uniform(Matrix{{0.0}, {-0.1}}), RngStream{1});
  REQUIRE_FALSE(res.stages.empty());
  CHECK(res.stages.size() <= 6);
  std::vector<double> prev(2, 0.0);
  for (const auto& st : res.stages) {
    CHECK(st.theta.weights == std::vector<double>{0.5, 0.5});
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(st.delta[j] >= prev[j]);
      // Only an order-statistic update guarantees N0 members; the clamp may not.
      if (st.delta[j] > prev[j]) CHECK(st.in_set[j] >= cfg.threshold_count(2));
    }
    prev = st.delta;
  }
  CHECK(res.stages.back().delta[0] >= 1.0);
  CHECK(res.stages.back().delta[1] >= 1.0);
  CHECK(res.theta.tilts(0, 0) > 2.0);
  CHECK(res.theta.tilts(1, 0) < -2.5);
}

TEST_CASE("a non-rare problem finishes after one stage") {
  const TwoSidedTail model({0.1, -0.1});
  RarityConfig cfg;
  const auto res = init_rarity_ce(model, cfg, MixtureParam::uniform(Matrix{{0.0}, {-0.1}}), RngStream{2});
  CHECK(res.stages.size() == 1);
}

TEST_CASE("rarity initialization rejects bad inputs and stalls loudly") {
  const TwoSidedTail model({2.0, -2.5});
  RarityConfig cfg;
  CHECK_THROWS(init_rarity_ce(model, cfg, MixtureParam({0.3, 0.7}, Matrix{{0.0}, {-0.1}}), RngStream{1}));
  CHECK_THROWS_AS(init_rarity_ce(model, cfg, MixtureParam::standard(1), RngStream{1}), DimensionMismatch);
  cfg.max_stages = 1;
  const TwoSidedTail far({6.0, -6.0});
  CHECK_THROWS_AS(init_rarity_ce(far, cfg, MixtureParam::uniform(Matrix{{0.0}, {-0.1}}), RngStream{1}),
                  StagnantRarity);
  const AsianCall asian(AsianSpec{});
  CHECK_THROWS_AS(init_rarity_ce(asian, cfg, MixtureParam::standard(30), RngStream{1}), EmbeddingUnavailable);
}

TEST_CASE("adaptive weights respect the minimum weight") {
  const TwoSidedTail model({2.0, -3.0});
  RarityConfig cfg;
  cfg.pilot_size = 20000;
  cfg.adaptive_weights = true;
  cfg.min_weight = 0.1;
  const auto res = init_rarity_ce(model, cfg, MixtureParam::uniform(Matrix{{0.0}, {-0.1}}), RngStream{3});
  for (const auto& st : res.stages)
    for (double w : st.theta.weights) CHECK(w >= 0.1 - 1e-12);
}

TEST_CASE("approximation initializers") {
  const auto th = init_approx(TwoSidedTail({1.0, -1.5}));
  CHECK(th.weights == std::vector<double>{0.5, 0.5});
  CHECK(th.tilts(0, 0) == 1.0);
  CHECK(th.tilts(1, 0) == -1.5);

  struct Bare final : Model {
    std::string name() const override { return "bare"; }
    std::size_t dim() const override { return 1; }
    double payoff(std::span<const double>) const override { return 1.0; }
  };
  CHECK_THROWS_AS(init_approx(Bare{}), ApproxUnavailable);
}
