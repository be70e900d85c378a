#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "smbs/predictive.hpp"
#include "smbs/urns.hpp"
#include "support.hpp"

using namespace smbs;

namespace {

BetaStacyParams bs(double c, CenteringDistribution f0) { return BetaStacyParams(PrecisionFunction::constant(c), std::move(f0)); }

/// Exact probability of a colour sequence from sequential compositions.
double sequence_probability(const DirichletParams& m, const std::vector<StateIndex>& seq) {
  DirUrn urn(m);
  double p = 1.0;
  for (auto j : seq) {
    p *= urn.probability(j);
    urn.reinforce(j);
  }
  return p;
}

/// Priors of the three-state trace example (ids 1,2,3 -> indices 0,1,2).
SmbsParams trace_prior() {
  return SmbsParams({{DirichletParams({0.0, 0.0, 1.0}), bs(1.0, CenteringDistribution::table({0.0, 0.0, 1.0}))},
                     {DirichletParams({1.0, 0.0, 1.0}), bs(1.0, CenteringDistribution::geometric(0.5))},
                     {DirichletParams({0.0, 1.0, 0.0}), bs(1.0, CenteringDistribution::table({0.0, 1.0}))}});
}

}  // namespace

TEST_CASE("Dir-urn basics") {
  Rng rng(1);
  DirUrn one(DirichletParams({0.0, 2.5, 0.0}));
  for (int k = 0; k < 50; ++k) CHECK(one.draw(rng) == 1);
  CHECK(one.composition()[1] == 52.5);
  CHECK(one.draw_count() == 50);
  CHECK(one.total() == 52.5);

  const DirichletParams m({1.0, 1.0});
  for (StateIndex a = 0; a < 2; ++a)
    for (StateIndex b = 0; b < 2; ++b)
      CHECK(sequence_probability(m, {a, b}) == doctest::Approx(a == b ? 0.5 * 2.0 / 3.0 : 0.5 / 3.0).epsilon(1e-15));
}

TEST_CASE("Dir-urn predictive formula on simulated histories") {
  Rng rng(2);
  const DirichletParams m({0.3, 1.1, 0.0, 2.6});
  DirUrn urn(m);
  std::vector<Count> counts(4, 0);
  for (int n = 0; n < 200; ++n) {
    for (StateIndex j = 0; j < 4; ++j)
      CHECK(urn.probability(j) == doctest::Approx((m.mass(j) + counts[j]) / (m.total() + n)).epsilon(1e-14));
    ++counts[urn.draw(rng)];
  }
  CHECK(counts[2] == 0);
}

TEST_CASE("Dir-urn exchangeability for short sequences") {
  const DirichletParams m({0.4, 1.3, 2.2});
  for (std::size_t len = 1; len <= 3; ++len)
    oracle::for_each_path(3, len, [&](const oracle::Path& seq) {
      auto perm = seq;
      std::sort(perm.begin(), perm.end());
      const double ref = sequence_probability(m, seq);
      std::vector<std::int64_t> n(3, 0);
      for (auto j : seq) ++n[j];
      CHECK(ref == doctest::Approx(oracle::dirichlet_moment(m.base(), n)).epsilon(1e-13));
      do CHECK(std::abs(sequence_probability(m, perm) - ref) < 1e-14);
      while (std::next_permutation(perm.begin(), perm.end()));
    });
}

TEST_CASE("BS-system draws") {
  Rng rng(3);
  SUBCASE("point mass at 1") {
    BsSystem s(bs(1.0, CenteringDistribution::table({1.0})));
    for (int k = 0; k < 20; ++k) CHECK(s.draw(rng) == 1);
  }
  SUBCASE("fresh geometric system") {
    BsSystem s(bs(1.0, CenteringDistribution::geometric(0.5)));
    CHECK(s.black_probability(1) == 0.5);
    CHECK(s.survival(1) == 0.5);
    CHECK(0.5 - s.survival(2) == doctest::Approx(0.25).epsilon(1e-15));
    s.observe(2);
    CHECK(s.survival(1) == doctest::Approx(0.75).epsilon(1e-15));
    const Duration obs[] = {2};
    CHECK(s.survival(1) == doctest::Approx(bs_posterior_exact(bs(1.0, CenteringDistribution::geometric(0.5)), obs).survival(1)));
  }
  SUBCASE("iteration cap") {
    BsSystem s(bs(1.0, CenteringDistribution::geometric(1e-9)), 10);
    CHECK_THROWS_AS(s.draw(rng), std::runtime_error);
    CHECK_THROWS_AS(BsSystem(bs(1.0, CenteringDistribution::geometric(0.5)), 0), std::invalid_argument);
  }
  SUBCASE("lazy materialization and reinforcement by one") {
    BsSystem s(bs(2.0, CenteringDistribution::geometric(0.3)));
    CHECK(s.materialized() == 0);
    const auto before = s.urn(4);
    CHECK(s.materialized() == 4);
    s.reinforce(4, true);
    CHECK(s.urn(4).black == before.black + 1.0);
    CHECK(s.urn(4).white == before.white);
  }
}

TEST_CASE("BS-system predictive survival equals the conjugate posterior") {
  const auto prior = bs(1.3, CenteringDistribution::discrete_weibull(0.5, 0.8));
  std::vector<Duration> hist;
  std::function<void()> rec = [&]() {
    BsSystem s(prior);
    for (auto h : hist) s.observe(h);
    const auto post = bs_posterior_exact(prior, hist);
    for (Duration t = 1; t <= 8; ++t) CHECK(std::abs(s.survival(t) - post.survival(t)) < 1e-14);
    if (hist.size() == 3) return;
    for (Duration h = 1; h <= 4; ++h) {
      hist.push_back(h);
      rec();
      hist.pop_back();
    }
  };
  rec();
}

TEST_CASE("urn trace of the three-state example") {
  const StateSpace space({1, 2, 3});
  UrnProcess urns(trace_prior());
  urns.enable_trace(true);
  Rng rng(4);
  const auto d = rup_generate(urns, 0, 2, rng);
  CHECK(d.visited == std::vector<StateIndex>{0, 2, 1});
  CHECK(d.holding == std::vector<Duration>{3, 2});
  const auto& tr = urns.trace();
  REQUIRE(tr.size() == 7);
  const std::vector<std::pair<UrnDraw::Kind, std::pair<StateIndex, Duration>>> expect{
      {UrnDraw::Kind::Holding, {0, 1}}, {UrnDraw::Kind::Holding, {0, 2}}, {UrnDraw::Kind::Holding, {0, 3}},
      {UrnDraw::Kind::Jump, {0, 0}},    {UrnDraw::Kind::Holding, {2, 1}}, {UrnDraw::Kind::Holding, {2, 2}},
      {UrnDraw::Kind::Jump, {2, 0}}};
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(tr[k].kind == expect[k].first);
    CHECK(tr[k].state == expect[k].second.first);
    CHECK(tr[k].index == expect[k].second.second);
  }
  CHECK(tr[2].outcome == 1);
  CHECK(tr[3].outcome == 2);
  CHECK(tr[6].outcome == 1);
  const auto v = recurrence_diagnostics(urns);
  CHECK(v.visits == std::vector<Count>{1, 1, 1});
  CHECK(v.transitions[0][2] == 1);
  CHECK(v.transitions[2][1] == 1);
}

TEST_CASE("zero jumps and empty diagnostics") {
  UrnProcess urns(trace_prior());
  const auto v0 = urns.recurrence_diagnostics();
  CHECK(v0.visits == std::vector<Count>{0, 0, 0});
  Rng rng(5);
  const auto d = rup_generate(urns, 1, 0, rng);
  CHECK(d.visited == std::vector<StateIndex>{1});
  CHECK(d.n_jumps == 0);
  CHECK_THROWS_AS(UrnProcess(trace_prior()).step_probabilities(), std::logic_error);
}

TEST_CASE("urn step law equals the predictive kernel along observed paths") {
  std::mt19937_64 rng(6);
  for (int r = 0; r < 300; ++r) {
    const auto prior = support::random_prior(3, rng);
    const auto path = oracle::random_path(3, 1 + rng() % 15, 0.5, rng);
    UrnProcess urns(prior);
    urns.restart(path[0]);
    const auto f = rup_step_prob(urns);
    const auto g = predictive_kernel(prior, CountingStats::fresh(3, path[0]));
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(f[j] - g[j]) < 1e-15);
    for (std::size_t t = 1; t < path.size(); ++t) urns.observe(path[t]);
    const auto a = rup_step_prob(urns);
    const auto b = predictive_kernel(prior, count_statistics(path, 3));
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-12);
  }
}

TEST_CASE("variant-B urn step law equals the variant-B kernel") {
  std::mt19937_64 rng(7);
  for (int r = 0; r < 300; ++r) {
    const auto prior = support::random_variant_b(3, rng);
    const auto path = oracle::random_path(3, 1 + rng() % 15, 0.5, rng);
    UrnProcess urns(prior);
    urns.restart(path[0]);
    for (std::size_t t = 1; t < path.size(); ++t) urns.observe(path[t]);
    const auto a = rup_step_prob(urns);
    const auto b = variant_b_kernel(prior, count_statistics(path, 3));
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-12);
  }
}

TEST_CASE("urn law of two-jump histories equals the kernel law and the oracle") {
  std::mt19937_64 rng(8);
  for (int r = 0; r < 10; ++r) {
    const auto pr = support::random_two_point_prior(2, rng);
    std::vector<oracle::TwoPointHolding> hold;
    for (std::size_t i = 0; i < 2; ++i) hold.push_back({pr.c[i] * pr.f1[i], pr.c[i] * (1.0 - pr.f1[i])});
    for (StateIndex start = 0; start < 2; ++start)
      for (Duration t0 = 1; t0 <= 2; ++t0)
        for (Duration t1 = 1; t1 <= 2; ++t1) {
          PathDecomposition d;
          d.n_jumps = 2;
          d.visited = {start, 1 - start, start};
          d.holding = {t0, t1};
          d.jump_times = {t0, t0 + t1};
          const auto path = compose_path(d, t0 + t1);
          UrnProcess urns(pr.params);
          urns.restart(start);
          double p = 1.0;
          for (std::size_t t = 1; t < path.size(); ++t) {
            p *= rup_step_prob(urns)[path[t]];
            urns.observe(path[t]);
          }
          CHECK(p == doctest::Approx(rsm_path_probability(pr.params, path)).epsilon(1e-10));
          CHECK(p == doctest::Approx(oracle::path_probability(path, pr.m, hold)).epsilon(1e-10));
        }
  }
}

TEST_CASE("urn-generated paths match the kernel law in distribution") {
  std::mt19937_64 prng(9);
  const auto prior = support::random_prior(3, prng);
  const int n = 100000;
  const std::size_t len = 4;
  std::vector<double> exact(3, 0.0);
  oracle::for_each_path(3, len, [&](const oracle::Path& p) {
    if (p[0] == 0) exact[p.back()] += rsm_path_probability(prior, p);
  });
  std::vector<int> hits(3, 0);
  for (int s = 0; s < n; ++s) {
    UrnProcess urns(prior);
    Rng rng = make_stream(10, static_cast<std::uint64_t>(s));
    ++hits[rup_sample_path(urns, 0, static_cast<Duration>(len) - 1, rng).back()];
  }
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(hits[j] / double(n) - exact[j]) < 3 * std::sqrt(exact[j] * (1 - exact[j]) / n));
}

TEST_CASE("generated decompositions, diagnostics and monotone reinforcement") {
  std::mt19937_64 prng(11);
  for (int r = 0; r < 50; ++r) {
    const auto prior = support::random_prior(3, prng);
    UrnProcess urns(prior);
    urns.enable_trace(true);
    Rng rng(static_cast<std::uint64_t>(r));
    const auto d = rup_generate(urns, r % 3, 8, rng);
    CHECK(d.n_jumps == 8);
    CHECK(d.terminal_age == 0);
    const auto path = compose_path(d, d.horizon());
    CHECK(decompose_path(path, 3) == d);
    const auto v = urns.recurrence_diagnostics();
    const auto s = count_statistics(path, 3);
    CHECK(v.transitions == s.transitions);
    std::vector<Count> visits(3, 0);
    for (auto i : d.visited) ++visits[i];
    CHECK(v.visits == visits);
    for (const auto& draw : urns.trace()) {
      REQUIRE(draw.pre_masses.size() == draw.post_masses.size());
      double added = 0.0;
      for (std::size_t k = 0; k < draw.pre_masses.size(); ++k) {
        CHECK(draw.post_masses[k] >= draw.pre_masses[k]);
        added += draw.post_masses[k] - draw.pre_masses[k];
      }
      CHECK(added == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("variant A: hidden target and pair holding systems") {
  const auto h1 = bs(1.0, CenteringDistribution::table({1.0}));
  const auto h3 = bs(1.0, CenteringDistribution::table({0.0, 0.0, 1.0}));
  std::vector<std::vector<std::optional<BetaStacyParams>>> pairs(3, std::vector<std::optional<BetaStacyParams>>(3));
  pairs[0][1] = h1;
  pairs[0][2] = h3;
  pairs[1][0] = h1;
  pairs[2][0] = h1;
  const VariantAParams prior({DirichletParams({0.0, 1.0, 1.0}), DirichletParams({1.0, 0.0, 0.0}), DirichletParams({1.0, 0.0, 0.0})},
                             pairs);
  CHECK_THROWS_AS(VariantAParams({DirichletParams({0.0, 1.0}), DirichletParams({1.0, 0.0})},
                                 std::vector<std::vector<std::optional<BetaStacyParams>>>(2, std::vector<std::optional<BetaStacyParams>>(2))),
                  std::invalid_argument);
  UrnProcess urns(prior);
  urns.restart(0);
  const auto p = rup_step_prob(urns);
  CHECK(p[1] == doctest::Approx(0.5));  // target 1 then black at V_{01,1}
  CHECK(p[0] == doctest::Approx(0.5));  // target 2 then white
  CHECK(p[2] == 0.0);
  CHECK_THROWS_AS(urns.observe(1), std::logic_error);

  Rng rng(12);
  std::map<std::pair<StateIndex, Duration>, int> seen;
  for (int k = 0; k < 200; ++k) {
    UrnProcess u(prior);
    const auto d = rup_generate(u, 0, 1, rng);
    ++seen[{d.visited[1], d.holding[0]}];
    // the holding time is the pair law's: 1 before state 1, 3 before state 2
    CHECK(d.holding[0] == (d.visited[1] == 1 ? 1 : 3));
  }
  CHECK(seen.size() == 2);

  SUBCASE("step law conditional on the pending target") {
    UrnProcess u(prior);
    u.restart(0);
    Rng r2(3);
    // draw until the walk stays, which means target 2 is pending
    while (u.step(r2) != 0) u.restart(0);
    const auto q = rup_step_prob(u);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[2] == 0.0);
  }
}

TEST_CASE("iteration cap in the urn process") {
  const auto slow = bs(1.0, CenteringDistribution::geometric(1e-12));
  UrnProcess urns(SmbsParams({{DirichletParams({0.0, 1.0}), slow}, {DirichletParams({1.0, 0.0}), slow}}));
  urns.set_iteration_cap(5);
  Rng rng(13);
  CHECK_THROWS_AS(rup_generate(urns, 0, 1, rng), std::runtime_error);
  CHECK_THROWS_AS(urns.set_iteration_cap(0), std::invalid_argument);
}
