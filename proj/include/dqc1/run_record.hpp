#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dqc1 {

/// z value of a two-sided 95% normal interval.
inline constexpr double kZ95 = 1.96;

/// One measurement-and-update step of an adaptive estimator.
struct StepRecord {
  std::size_t step = 0;
  /// Evolution time T_l (continuous) or power q_l (discrete).
  double time = 0.0;
  std::int64_t winding = 0;
  /// Zoom ratio a_l = T_l/T_{l-1} (continuous) or q_l/q_{l-1} (discrete).
  double zoom = 1.0;
  /// Noisy cos (or sin) estimate fed to the update.
  double outcome = 0.0;
  double theta_hat = 0.0;
  /// Posterior standard deviation of the phase 2θT_l (Δ_l) or 2θq_l + 2φ_l (Σ_l).
  double dev = 0.0;
  /// Nominal 95% credible interval on θ.
  double lo = 0.0;
  double hi = 0.0;
  bool sine = false;
  bool outlier = false;
  /// Phase compensation φ_l (discrete mode).
  double phase_comp = 0.0;
  /// Black-box calls (or probe exchanges) consumed so far.
  std::uint64_t calls_cumulative = 0;
  /// Product-formula slices per unit of the evolution (multiparam mode).
  std::uint64_t slices = 0;
  double delta_gamma = 0.0;
  double gamma = 0.0;
  /// Standard deviation used in the likelihood (Δ or Δ').
  double likelihood_delta = 0.0;
};

/// Full trace of one estimation run.
struct RunRecord {
  std::uint64_t trial = 0;
  std::size_t nu = 0;
  double theta_true = 0.0;
  double theta_prior = 0.0;
  double theta_hat = 0.0;
  /// Posterior standard deviation of θ at the last step.
  double posterior_std = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double target_precision = 0.0;
  bool converged = false;
  /// Σ_l T_l (continuous) or Σ_l q_l (discrete).
  double total_time = 0.0;
  /// Last T_K (continuous) or q_K (discrete).
  double final_time = 0.0;
  std::uint64_t total_calls = 0;
  std::uint64_t total_slices = 0;
  std::size_t outliers = 0;
  /// Non-empty when the run aborted with an error.
  std::string error;
  std::vector<StepRecord> steps;

  bool covers() const { return lo <= theta_true && theta_true <= hi; }
};

}  // namespace dqc1
