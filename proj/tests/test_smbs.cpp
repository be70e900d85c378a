#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "smbs/predictive.hpp"
#include "smbs/smbs.hpp"
#include "support.hpp"

using namespace smbs;

namespace {

const StateSequence kExample{0, 0, 1, 2, 2, 2};

SmbsParams uniform_prior(std::size_t n, double c, double p) {
  std::vector<StatePrior> states;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> m(n, 1.0);
    m[i] = 0.0;
    states.push_back({DirichletParams(m), BetaStacyParams(PrecisionFunction::constant(c), CenteringDistribution::geometric(p))});
  }
  return SmbsParams(std::move(states));
}

}  // namespace

TEST_CASE("prior validation") {
  const BetaStacyParams h(PrecisionFunction::constant(1.0), CenteringDistribution::geometric(0.5));
  CHECK_THROWS_AS(SmbsParams({}), std::invalid_argument);
  CHECK_THROWS_AS(SmbsParams({{DirichletParams({1.0, 1.0}), h}, {DirichletParams({1.0, 0.0}), h}}), std::invalid_argument);
  CHECK_THROWS_AS(SmbsParams({{DirichletParams({0.0, 1.0, 0.0}), h}, {DirichletParams({1.0, 0.0}), h}}),
                  std::invalid_argument);
  CHECK_NOTHROW(SmbsParams({{DirichletParams({0.0, 1.0}), h}, {DirichletParams({1.0, 0.0}), h}}));
}

TEST_CASE("posterior of the worked example path") {
  const auto prior = uniform_prior(3, 1.0, 0.4);
  const auto post = smbs_posterior(prior, kExample);
  CHECK(post.jump(0).mass(1) == prior.jump(0).mass(1) + 1.0);
  CHECK(post.jump(0).mass(2) == prior.jump(0).mass(2));
  CHECK(post.jump(1).mass(2) == prior.jump(1).mass(2) + 1.0);
  CHECK(post.jump(2) == prior.jump(2));
  CHECK(post.holding(0).exact_observations().at(2) == 1);
  CHECK(post.holding(0).exact_observations().total() == 1);
  CHECK(post.holding(1).exact_observations().at(1) == 1);
  CHECK(post.holding(2).exact_observations().empty());
  CHECK(post.holding(2).censored_observations().at(2) == 1);
  CHECK(post.holding(2).censored_observations().total() == 1);
  for (StateIndex i = 0; i < 3; ++i) CHECK(post.jump(i).mass(i) == 0.0);
}

TEST_CASE("a one-point path leaves the prior unchanged") {
  const auto prior = uniform_prior(3, 2.0, 0.3);
  CHECK(smbs_posterior(prior, {1}) == prior);
  // zero terminal age carries no censoring record
  const auto post = smbs_posterior(prior, {0, 1});
  CHECK(post.holding(1).censored_observations().empty());
  CHECK_THROWS_AS(smbs_posterior(prior, {0, 3}), std::invalid_argument);
}

TEST_CASE("multi-path posterior") {
  const auto prior = uniform_prior(3, 1.0, 0.4);
  CHECK(smbs_posterior_multi(prior, {}) == prior);
  const std::vector<StateSequence> two{kExample, kExample};
  const auto post = smbs_posterior_multi(prior, two);
  CHECK(post.jump(0).mass(1) == prior.jump(0).mass(1) + 2.0);
  CHECK(post.jump(1).mass(2) == prior.jump(1).mass(2) + 2.0);
  CHECK(post.holding(0).exact_observations().at(2) == 2);
  CHECK(post.holding(2).censored_observations().at(2) == 2);

  std::vector<StateSequence> paths{{0, 1, 1, 2}, {2, 2, 0}, {1, 0, 0, 0, 2, 1}};
  std::sort(paths.begin(), paths.end());
  const auto ref = smbs_posterior_multi(prior, paths);
  do {
    CHECK(smbs_posterior_multi(prior, paths) == ref);
  } while (std::next_permutation(paths.begin(), paths.end()));
}

TEST_CASE("sufficiency: equal statistics give equal posteriors") {
  const auto prior = uniform_prior(3, 1.5, 0.2);
  // Both paths: blocks 0(2)->1(1)->0(1)->1 terminal age 0 vs reordered blocks.
  const StateSequence a{0, 0, 1, 0, 1};
  const StateSequence b{0, 1, 0, 0, 1};
  REQUIRE(count_statistics(a, 3).block_counts == count_statistics(b, 3).block_counts);
  REQUIRE(count_statistics(a, 3).transitions == count_statistics(b, 3).transitions);
  CHECK(smbs_posterior(prior, a) == smbs_posterior(prior, b));
}

TEST_CASE("posterior keeps zero self-mass on random paths") {
  std::mt19937_64 rng(5);
  for (int r = 0; r < 200; ++r) {
    const auto prior = support::random_prior(3, rng);
    const auto path = oracle::random_path(3, 1 + rng() % 30, 0.5, rng);
    const auto post = smbs_posterior(prior, path);
    for (StateIndex i = 0; i < 3; ++i) CHECK(post.jump(i).mass(i) == 0.0);
    CHECK_NOTHROW(SmbsParams(post.states()));
  }
}

TEST_CASE("posterior predictive matches the brute-force Bayes oracle") {
  // |E|=2 and |E|=3, holding support {1,2}: next-state predictive from the
  // posterior equals the ratio of prior expectations of likelihoods.
  std::mt19937_64 rng(6);
  for (std::size_t n : {2u, 3u}) {
    for (int r = 0; r < 5; ++r) {
      const auto pr = support::random_two_point_prior(n, rng);
      std::vector<oracle::TwoPointHolding> hold;
      for (std::size_t i = 0; i < n; ++i) hold.push_back({pr.c[i] * pr.f1[i], pr.c[i] * (1.0 - pr.f1[i])});
      for (std::size_t len = 1; len <= 4; ++len) {
        oracle::for_each_path(n, len, [&](const oracle::Path& p) {
          const double denom = oracle::path_probability(p, pr.m, hold);
          if (denom == 0.0) return;
          const auto post = smbs_posterior(pr.params, p);
          auto fresh = CountingStats::fresh(n, p.back());
          fresh.terminal_age = oracle::terminal_age(p);
          const auto k = predictive_kernel(post, fresh);
          for (std::size_t j = 0; j < n; ++j) {
            auto q = p;
            q.push_back(j);
            CHECK(k[j] == doctest::Approx(oracle::path_probability(q, pr.m, hold) / denom).epsilon(1e-10));
          }
        });
      }
    }
  }
}

TEST_CASE("sampled couples") {
  Rng rng(7);
  const BetaStacyParams h(PrecisionFunction::constant(1.0), CenteringDistribution::geometric(0.5));
  SUBCASE("one-hot jump measures give one-hot rows") {
    const SmbsParams p({{DirichletParams({0.0, 0.0, 2.0}), h}, {DirichletParams({1.0, 0.0, 0.0}), h},
                        {DirichletParams({0.0, 3.0, 0.0}), h}});
    for (int k = 0; k < 100; ++k) {
      auto c = smbs_sample(p, rng);
      CHECK(c.transition[0] == std::vector<double>{0, 0, 1});
      CHECK(c.transition[1] == std::vector<double>{1, 0, 0});
      CHECK(c.transition[2] == std::vector<double>{0, 1, 0});
      CHECK_NOTHROW(c.validate());
    }
  }
  SUBCASE("Monte Carlo means of P and F") {
    auto prior = uniform_prior(3, 2.0, 0.35);
    prior = smbs_posterior(prior, {0, 0, 1, 2, 2, 0, 1, 1, 1});
    const int n = 10000;
    double sp = 0, sp2 = 0, sf = 0, sf2 = 0;
    for (int k = 0; k < n; ++k) {
      auto c = smbs_sample(prior, rng);
      const double p01 = c.transition[0][1];
      const double f = 1.0 - c.holding[1].survival(2);
      sp += p01;
      sp2 += p01 * p01;
      sf += f;
      sf2 += f * f;
      for (StateIndex i = 0; i < 3; ++i) CHECK(c.transition[i][i] == 0.0);
    }
    const double mp = sp / n, mf = sf / n;
    CHECK(std::abs(mp - dir_mean(prior.jump(0), 1)) < 3 * std::sqrt((sp2 / n - mp * mp) / n));
    CHECK(std::abs(mf - bs_mean(prior.holding(1), 2)) < 3 * std::sqrt((sf2 / n - mf * mf) / n));
  }
}

TEST_CASE("couple validation") {
  CharacteristicCouple c;
  c.transition = {{0.0, 1.0}, {0.5, 0.5}};
  c.holding.emplace_back(CenteringDistribution::geometric(0.5));
  c.holding.emplace_back(CenteringDistribution::geometric(0.5));
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.transition = {{0.0, 1.0}, {0.9, 0.0}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.transition = {{0.0, 1.0}, {1.0, 0.0}};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("semi-Markov path sampling") {
  Rng rng(8);
  SUBCASE("horizon zero") {
    CharacteristicCouple c;
    c.transition = {{0.0, 1.0}, {1.0, 0.0}};
    c.holding.emplace_back(CenteringDistribution::geometric(0.5));
    c.holding.emplace_back(CenteringDistribution::geometric(0.5));
    CHECK(sm_sample_path(c, 1, 0, rng) == StateSequence{1});
    CHECK_THROWS_AS(sm_sample_path(c, 1, -1, rng), std::invalid_argument);
  }
  SUBCASE("forced dynamics alternate") {
    CharacteristicCouple c;
    c.transition = {{0.0, 1.0}, {1.0, 0.0}};
    c.holding.emplace_back(CenteringDistribution::table({1.0}));
    c.holding.emplace_back(CenteringDistribution::table({1.0}));
    const auto p = sm_sample_path(c, 0, 9, rng);
    REQUIRE(p.size() == 10);
    for (std::size_t t = 0; t < p.size(); ++t) CHECK(p[t] == t % 2);
  }
  SUBCASE("geometric holdings give the Markov chain one-step law") {
    CharacteristicCouple c;
    c.transition = {{0.0, 0.3, 0.7}, {0.5, 0.0, 0.5}, {1.0, 0.0, 0.0}};
    const double p[3] = {0.4, 0.7, 0.2};
    for (double q : p) c.holding.emplace_back(CenteringDistribution::geometric(q));
    const auto path = sm_sample_path(c, 0, 100000, rng);
    std::vector<std::vector<double>> counts(3, std::vector<double>(3, 0.0));
    std::vector<double> from(3, 0.0);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      counts[path[t]][path[t + 1]] += 1;
      from[path[t]] += 1;
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double expect = i == j ? 1.0 - p[i] : p[i] * c.transition[i][j];
        const double f = counts[i][j] / from[i];
        CHECK(std::abs(f - expect) < 3 * std::sqrt(expect * (1 - expect) / from[i]) + 1e-12);
      }
  }
  SUBCASE("couples sampled from a prior produce valid paths") {
    const auto prior = uniform_prior(3, 1.0, 0.3);
    for (int k = 0; k < 20; ++k) {
      auto c = smbs_sample(prior, rng);
      const auto path = sm_sample_path(c, 2, 200, rng);
      CHECK(path.size() == 201);
      CHECK(path[0] == 2);
      CHECK(compose_path(decompose_path(path, 3), 200) == path);
    }
  }
}

TEST_CASE("variant-B prior and posterior") {
  const BetaStacyParams h(PrecisionFunction::constant(1.0), CenteringDistribution::geometric(0.4));
  const DirichletParams d0({0.0, 1.0, 1.0}), d1({1.0, 0.0, 1.0}), d2({1.0, 1.0, 0.0});
  VariantBParams prior({h, h, h}, {d0, d1, d2});
  CHECK_THROWS_AS(prior.set_jump(0, 1, DirichletParams({1.0, 1.0, 1.0})), std::invalid_argument);
  CHECK_THROWS_AS(prior.set_jump(0, 0, d0), std::invalid_argument);
  prior.set_jump(0, 2, DirichletParams({0.0, 5.0, 1.0}));
  CHECK(prior.jump(0, 2).mass(1) == 5.0);
  CHECK(prior.jump(0, 3) == d0);

  const auto post = variant_b_posterior(prior, kExample);
  CHECK(post.jump(0, 2).mass(1) == 6.0);
  CHECK(post.jump(1, 1).mass(2) == d1.mass(2) + 1.0);
  CHECK(post.jump(0, 1) == d0);
  CHECK(post.holding(0).exact_observations().at(2) == 1);
  CHECK(post.holding(2).censored_observations().at(2) == 1);
  CHECK(variant_b_posterior(prior, {1, 1, 1}).jump_overrides() == prior.jump_overrides());
  CHECK(variant_b_posterior(prior, {1, 1, 1}).holding(1).censored_observations().at(2) == 1);
}

TEST_CASE("variant-B holding updates match the SMBS update") {
  std::mt19937_64 rng(9);
  for (int r = 0; r < 100; ++r) {
    const auto vb = support::random_variant_b(3, rng);
    std::vector<StatePrior> states;
    for (StateIndex i = 0; i < 3; ++i) states.push_back({vb.default_jump(i), vb.holding(i)});
    const SmbsParams sp(states);
    const auto path = oracle::random_path(3, 1 + rng() % 30, 0.5, rng);
    const auto a = variant_b_posterior(vb, path);
    const auto b = smbs_posterior(sp, path);
    for (StateIndex i = 0; i < 3; ++i) CHECK(a.holding(i) == b.holding(i));
  }
}
