#include "smbs/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smbs {

DirichletParams::DirichletParams(std::vector<double> base) : base_(std::move(base)) {
  for (double m : base_) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw std::invalid_argument("Dirichlet base masses must be finite and non-negative");
    total_ += m;
  }
  if (!(total_ > 0.0) || !std::isfinite(total_))
    throw std::invalid_argument("Dirichlet base measure must have positive finite total mass");
}

DirichletParams dir_posterior(const DirichletParams& prior, std::span<const Count> counts) {
  if (counts.size() != prior.size())
    throw std::invalid_argument("count vector does not match the state space");
  std::vector<double> base = prior.base();
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (counts[j] < 0) throw std::invalid_argument("Dirichlet counts must be non-negative");
    base[j] += static_cast<double>(counts[j]);
  }
  return DirichletParams(std::move(base));
}

double dir_mean(const DirichletParams& params, StateIndex j) { return params.mass(j) / params.total(); }

std::vector<double> dir_sample(const DirichletParams& params, Rng& rng) {
  // Normalized independent gammas, in log space so that small masses cannot
  // underflow every coordinate at once.
  const auto& m = params.base();
  std::vector<double> logs(m.size());
  double max_log = -INFINITY;
  for (std::size_t j = 0; j < m.size(); ++j) {
    logs[j] = log_gamma_variate(m[j], rng);
    max_log = std::max(max_log, logs[j]);
  }
  std::vector<double> p(m.size(), 0.0);
  if (std::isinf(max_log)) {
    // All variates vanished (only possible for denormal masses): fall back to
    // the limiting one-hot draw.
    p[categorical(m, rng)] = 1.0;
    return p;
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    p[j] = m[j] == 0.0 ? 0.0 : std::exp(logs[j] - max_log);
    sum += p[j];
  }
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace smbs
