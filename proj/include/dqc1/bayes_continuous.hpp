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

/// Parameters of the continuous-time zoom-in estimator.
struct ZoomPolicy {
  /// Prior width multiplier: the first phase 2θT_1 has prior std cΔ.
  double c = 10.0;
  /// Cap on the zoom ratio T_{l+1}/T_l.
  double c_prime = 10.0;
  /// Per-measurement noise Δ assumed by the prior.
  double delta = 1e-3;
  /// Stop when the posterior std of θ, Δ_l/(2T_l), is at most this.
  double target_precision = 1e-6;
  /// χ: smallest prior mean served by the cosine pipeline.
  double theta_floor = 0.05;
  std::size_t max_steps = 200;

  /// Every violated precondition, empty when the policy is usable.
  std::vector<std::string> violations() const;
  /// Throws PreconditionError listing all violations.
  void validate() const;
};

enum class MeasurementKind { cosine, sine };

/// The next measurement: time, winding and the prior on its phase 2θT.
struct ZoomStep {
  double t = 0.0;
  std::int64_t winding = 0;
  /// a = T_next / T_current (1 for the first measurement).
  double ratio = 1.0;
  /// Prior mean of 2θT_next (π/2 + 2pπ on the cosine pipeline).
  double prior_phase = 0.0;
  /// Prior std of 2θT_next.
  double prior_dev = 0.0;
  MeasurementKind kind = MeasurementKind::cosine;
};

struct EstimatorState {
  std::size_t step = 0;
  double theta_hat = 0.0;
  /// Δ_l: posterior std of 2θT_l; before the first update, the prior std cΔ.
  double scaled_dev = 0.0;
  /// T_l; zero before the first measurement.
  double t_current = 0.0;
  std::int64_t winding = 0;
  std::optional<ZoomStep> pending;
  std::vector<StepRecord> history;

  /// Posterior std of θ, Δ_l/(2T_l).
  double theta_std() const;
};

/// T_1 = π/(4θ̂_0), prior std cΔ on 2θT_1. Requires χ <= θ̂_0 < π.
EstimatorState init_schedule(double theta0_hat, const ZoomPolicy& policy);

/// Small-θ start: measure sin(2θT'_1) at T'_1 = 1 with prior std cΔ on 2θT'_1.
EstimatorState init_sine_schedule(double theta0_hat, const ZoomPolicy& policy);

/// Conjugate update with the outcome x of the pending measurement.
///
/// Cosine steps use a' = prior_dev/σ, θ̂ = (π/2 + 2pπ - a'²/(1+a'²)x)/(2T) and
/// Δ_l = a'/√(1+a'²)σ, where σ is likelihood_delta (default: policy.delta).
/// |x| > 1 + 5Δ marks the step as an outlier; the update is still applied.
EstimatorState posterior_update(const EstimatorState& state, double x, const ZoomPolicy& policy,
                                std::optional<double> likelihood_delta = std::nullopt);

/// Largest winding p with T_next/T_l <= c' where 2θ̂_l T_next = π/2 + 2pπ.
ZoomStep next_zoom(const EstimatorState& state, const ZoomPolicy& policy);

/// Next step while on the sine pipeline: hands off to next_zoom once
/// π/(4θ̂) <= c'T_l, otherwise zooms by min(c', π/(8θ̂T_l)).
ZoomStep next_sine_step(const EstimatorState& state, const ZoomPolicy& policy);

/// Stores the next measurement in state.pending.
EstimatorState schedule(EstimatorState state, const ZoomPolicy& policy);

bool reached_target(const EstimatorState& state, const ZoomPolicy& policy);

/// One noisy signal value with the standard deviation to use in the likelihood.
struct SignalSample {
  double value = 0.0;
  double likelihood_delta = 0.0;
  /// Deterministic bias of the mean (ground truth, simulation only).
  double bias = 0.0;
  std::uint64_t slices = 0;
  double delta_gamma = 0.0;
};

/// Source of noisy cos(2ϑt) and sin(2ϑt) values, ϑ = κθ.
class PhaseSignal {
 public:
  virtual ~PhaseSignal() = default;
  virtual SignalSample cosine(double t, SampleStream& stream) const = 0;
  virtual SignalSample sine(double t, SampleStream& stream) const = 0;
  /// κ relating the estimated frequency ϑ to θ.
  virtual double frequency_scale() const { return 1.0; }
};

/// Signal from an su(2) probe with evolution exp(-iθ_true·H0·t).
class Su2Signal final : public PhaseSignal {
 public:
  Su2Signal(Su2Probe probe, double theta_true, NoiseModel noise);

  SignalSample cosine(double t, SampleStream& stream) const override;
  SignalSample sine(double t, SampleStream& stream) const override;
  double frequency_scale() const override { return probe_.frequency_scale(); }

 private:
  Su2Probe probe_;
  double theta_true_;
  NoiseModel noise_;
};

/// Full adaptive run. theta0_hat is the prior mean of θ; the record's steps
/// are in θ units. Measurement l draws from key.with_step(l).
RunRecord run_estimation(const PhaseSignal& signal, double theta0_hat, const ZoomPolicy& policy,
                         const StreamKey& key);

/// Convenience form: prior drawn by draw_continuous_prior from key.with_step(0).
RunRecord run_estimation(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                         double theta_true, const ZoomPolicy& policy, const NoiseModel& noise,
                         std::uint64_t trial);

/// Prior mean consistent with the calibration convention: the first phase
/// 2θT_1 is N(π/2, (cΔ)²) around the value implied by θ̂_0 (cosine pipeline),
/// or 2θT'_1 is N(2θ̂_0, (cΔ)²) with T'_1 = 1 when the cosine draw falls below χ.
double draw_continuous_prior(double theta_true, const ZoomPolicy& policy, SampleStream& stream,
                             double frequency_scale = 1.0);

}  // namespace dqc1
