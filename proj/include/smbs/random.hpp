#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace smbs {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent, reproducible streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Generator for stream `stream` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform on [0,1).
double uniform01(Rng& rng);

/// log of a Gamma(shape, 1) variate. Works for tiny shapes where the variate
/// itself underflows. shape == 0 gives -inf (point mass at 0).
double log_gamma_variate(double shape, Rng& rng);

/// Beta(a, b) with the degenerate conventions Beta(0,b) = 0, Beta(a,0) = 1.
/// Throws std::domain_error for Beta(0,0) or negative/non-finite shapes.
double beta_variate(double a, double b, Rng& rng);

/// Index drawn with probability proportional to weights (need not be normalized).
std::size_t categorical(std::span<const double> weights, Rng& rng);

}  // namespace smbs
