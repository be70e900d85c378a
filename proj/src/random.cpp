#include "smbs/random.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smbs {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

double uniform01(Rng& rng) {
  // 53 random bits; avoids the implementation-defined std::generate_canonical.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape >= 0.0) || !std::isfinite(shape))
    throw std::domain_error("gamma shape must be finite and non-negative");
  if (shape == 0.0) return -std::numeric_limits<double>::infinity();
  if (shape >= 1.0) {
    std::gamma_distribution<double> g(shape, 1.0);
    return std::log(g(rng));
  }
  // G(a) = G(a+1) * U^(1/a), taken in log space.
  std::gamma_distribution<double> g(shape + 1.0, 1.0);
  const double log_g = std::log(g(rng));
  double u = uniform01(rng);
  while (u == 0.0) u = uniform01(rng);
  return log_g + std::log(u) / shape;
}

double beta_variate(double a, double b, Rng& rng) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("beta shapes must be finite and non-negative");
  if (a == 0.0 && b == 0.0) throw std::domain_error("Beta(0,0) is undefined");
  if (a == 0.0) return 0.0;
  if (b == 0.0) return 1.0;
  const double la = log_gamma_variate(a, rng);
  const double lb = log_gamma_variate(b, rng);
  if (std::isinf(la) && std::isinf(lb)) {
    // Both shapes so small that the variates vanish: Beta(a,b) -> Bernoulli(a/(a+b)).
    return uniform01(rng) < a / (a + b) ? 1.0 : 0.0;
  }
  // a-variate / (a-variate + b-variate), stable for either one dominating.
  if (la >= lb) return 1.0 / (1.0 + std::exp(lb - la));
  const double r = std::exp(la - lb);
  return r / (1.0 + r);
}

std::size_t categorical(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::domain_error("categorical weights must have positive total");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (u < acc) return k;
  }
  return last_positive;
}

}  // namespace smbs
