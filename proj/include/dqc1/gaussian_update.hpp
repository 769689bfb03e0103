#pragma once

#include <cmath>

namespace dqc1 {

/// Posterior of a scalar phase β ~ N(prior_mean, prior_std²) after observing
/// y = f(β) + N(0, noise_std²), with f linearized at the prior mean:
/// f(β) ≈ predicted + slope·(β - prior_mean).
///
/// Conjugate normal algebra gives
///   mean = prior_mean + s²g/(g²s² + σ²)·(y - predicted)
///   var  = s²σ²/(g²s² + σ²).
/// For f = cos linearized at π/2 + 2pπ (g = -1, predicted 0) and s = a'σ this
/// reduces to mean = prior_mean - a'²/(1+a'²)·y and std = a'/√(1+a'²)·σ.
struct GaussianPosterior {
  double mean = 0.0;
  double stddev = 0.0;
};

inline GaussianPosterior linearized_update(double prior_mean, double prior_std, double slope,
                                           double predicted, double y, double noise_std) {
  const double s2 = prior_std * prior_std;
  const double n2 = noise_std * noise_std;
  const double denom = slope * slope * s2 + n2;
  return {prior_mean + s2 * slope / denom * (y - predicted), std::sqrt(s2 * n2 / denom)};
}

}  // namespace dqc1
