#pragma once

// Random priors and paths shared by the test suites.

#include <random>
#include <vector>

#include "smbs/beta_stacy.hpp"
#include "smbs/smbs.hpp"

namespace support {

using namespace smbs;

inline double unif(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Centering with full support on the positive integers.
inline CenteringDistribution random_centering(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return CenteringDistribution::geometric(unif(rng, 0.1, 0.9));
    case 1:
      return CenteringDistribution::discrete_weibull(unif(rng, 0.1, 0.9), unif(rng, 0.3, 1.5));
    default: {
      std::vector<double> pmf{unif(rng, 0.05, 0.3), unif(rng, 0.05, 0.3), unif(rng, 0.05, 0.3)};
      return CenteringDistribution::table(pmf, unif(rng, 0.2, 0.8));
    }
  }
}

inline PrecisionFunction random_precision(std::mt19937_64& rng) {
  PrecisionFunction c;
  const auto head = rng() % 4;
  for (std::size_t k = 0; k < head; ++k) c.head.push_back(unif(rng, 0.1, 5.0));
  c.tail = unif(rng, 0.1, 5.0);
  return c;
}

/// Jump measure with zero self-mass and positive mass elsewhere.
inline DirichletParams random_jump(std::size_t n, StateIndex i, std::mt19937_64& rng) {
  std::vector<double> m(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) m[j] = unif(rng, 0.1, 3.0);
  return DirichletParams(m);
}

inline SmbsParams random_prior(std::size_t n, std::mt19937_64& rng) {
  std::vector<StatePrior> states;
  for (std::size_t i = 0; i < n; ++i)
    states.push_back({random_jump(n, i, rng), BetaStacyParams(random_precision(rng), random_centering(rng))});
  return SmbsParams(std::move(states));
}

inline VariantBParams random_variant_b(std::size_t n, std::mt19937_64& rng, Duration max_t = 4) {
  std::vector<BetaStacyParams> holding;
  std::vector<DirichletParams> defaults;
  for (std::size_t i = 0; i < n; ++i) {
    holding.emplace_back(random_precision(rng), random_centering(rng));
    defaults.push_back(random_jump(n, i, rng));
  }
  VariantBParams out(std::move(holding), std::move(defaults));
  for (std::size_t i = 0; i < n; ++i)
    for (Duration t = 1; t <= max_t; ++t)
      if (rng() % 2) out.set_jump(i, t, random_jump(n, i, rng));
  return out;
}

/// Two-point holding laws on {1,2} with constant precision and a random jump prior.
struct TwoPointPrior {
  SmbsParams params;
  std::vector<std::vector<double>> m;
  std::vector<double> c, f1;
};

inline TwoPointPrior random_two_point_prior(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::vector<double>> ms;
  std::vector<double> cs, f1s;
  std::vector<StatePrior> states;
  for (std::size_t i = 0; i < n; ++i) {
    const auto jump = random_jump(n, i, rng);
    const double c = unif(rng, 0.2, 4.0), f1 = unif(rng, 0.1, 0.9);
    ms.push_back(jump.base());
    cs.push_back(c);
    f1s.push_back(f1);
    states.push_back({jump, BetaStacyParams(PrecisionFunction::constant(c), CenteringDistribution::table({f1, 1.0 - f1}))});
  }
  return {SmbsParams(std::move(states)), ms, cs, f1s};
}

}  // namespace support
