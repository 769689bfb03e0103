#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqc1/measurement.hpp"
#include "dqc1/run_record.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {

/// Parameters of the discrete-time (integer power) estimator.
struct BlackBoxPolicy {
  /// Zoom base: q_{l+1} = b·q_l.
  std::uint64_t b = 8;
  double delta = 1e-3;
  /// Prior multiplier: the first phase 2θq_1 + 2φ_1 has prior std cΔ.
  double c = 10.0;
  /// Stop when Σ'_l = Σ_l/(2q_l) <= target_precision.
  double target_precision = 1e-6;
  std::size_t max_steps = 64;
  /// With compensation, each step re-centres the phase with e^{-iφH0}.
  /// Without it (no known generator), φ = 0 and q is picked to keep the
  /// cosine slope large; the update then uses the general linearized kernel.
  bool compensate = true;

  std::vector<std::string> violations() const;
  void validate() const;
};

/// The next black-box measurement: power, compensation and phase prior.
struct PowerStep {
  std::uint64_t q = 1;
  /// φ_l in (-π/2, π/2].
  double phase_comp = 0.0;
  std::int64_t winding = 0;
  /// Prior mean of β = 2θq + 2φ.
  double prior_phase = 0.0;
  /// Prior std of β.
  double prior_dev = 0.0;
};

struct DiscreteState {
  std::size_t step = 0;
  double theta_hat = 0.0;
  /// Σ_l: posterior std of 2θq_l + 2φ_l (prior std cΔ before the first update).
  double sigma = 0.0;
  /// q_l; zero before the first measurement.
  std::uint64_t q = 0;
  double phase_comp = 0.0;
  std::int64_t winding = 0;
  std::uint64_t calls = 0;
  std::optional<PowerStep> pending;
  std::vector<StepRecord> history;

  /// Σ'_l = Σ_l/(2q_l), the posterior std of θ.
  double theta_std() const;
};

/// q_1 = 1, φ_1 = π/4 - θ̂_0. Requires 0 < θ̂_0 < π/4.
DiscreteState init_discrete(double theta0_hat, const BlackBoxPolicy& policy);

/// Conjugate update with outcome y of the pending measurement. With
/// b' = prior_dev/σ: θ̂ = (π/2 + 2pπ - 2φ - b'²/(1+b'²)y)/(2q) and
/// Σ = b'/√(1+b'²)σ, σ = likelihood_delta (default: policy.delta).
DiscreteState discrete_update(const DiscreteState& state, double y, const BlackBoxPolicy& policy,
                              std::optional<double> likelihood_delta = std::nullopt);

/// Compensated schedule: q' = b·q, φ' ∈ (-π/2, π/2] and p' solving
/// 2θ̂q' + 2φ' = π/2 + 2p'π.
PowerStep next_power(const DiscreteState& state, const BlackBoxPolicy& policy);

/// Uncompensated schedule: φ = 0 and q' ∈ [max(q+1, ⌈bq/2⌉), bq] maximizing |sin(2θ̂q')|.
PowerStep next_power_uncompensated(const DiscreteState& state, const BlackBoxPolicy& policy);

/// Solves 2θ̂q + 2φ = π/2 + 2pπ for φ ∈ (-π/2, π/2].
PowerStep compensated_power(double theta_hat, std::uint64_t q);

/// Source of noisy cos(2ϑq + 2φ), ϑ = κθ, from q black-box calls.
class PowerSignal {
 public:
  virtual ~PowerSignal() = default;
  virtual double cosine(std::uint64_t q, double phase_comp, SampleStream& stream,
                        double* likelihood_delta) const = 0;
  virtual double frequency_scale() const { return 1.0; }
};

/// W_B = exp(-iθ_true·H0); W_a(q, φ) = W_B^q·exp(-iφH0) on an su(2) probe.
class BlackBoxSignal final : public PowerSignal {
 public:
  BlackBoxSignal(Su2Probe probe, double theta_true, NoiseModel noise);
  double cosine(std::uint64_t q, double phase_comp, SampleStream& stream,
                double* likelihood_delta) const override;
  double frequency_scale() const override { return probe_.frequency_scale(); }

 private:
  Su2Probe probe_;
  NoiseModel noise_;
  DenseOperator w_b_;
};

/// Full discrete run with a given prior mean (θ units).
RunRecord run_discrete(const PowerSignal& signal, double theta0_hat, const BlackBoxPolicy& policy,
                       const StreamKey& key);

/// Convenience form with the prior drawn by draw_discrete_prior.
RunRecord run_discrete(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                       double theta_true, const BlackBoxPolicy& policy, const NoiseModel& noise,
                       std::uint64_t trial);

/// Prior mean with 2θ̂_0 = 2θ - cΔz (ϑ units rescaled by κ).
double draw_discrete_prior(double theta_true, const BlackBoxPolicy& policy, SampleStream& stream,
                           double frequency_scale = 1.0);

/// (b^K - 1)/(b - 1): black-box calls of a compensated run with K steps.
std::uint64_t geometric_calls(std::uint64_t b, std::size_t k);

}  // namespace dqc1
