#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dqc1/dense.hpp"
#include "dqc1/pauli.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {

/// Gaussian output noise of one DQC1 trace estimate.
struct NoiseModel {
  /// Per-run standard deviation Δ.
  double delta = 1e-3;
  /// Repetitions K averaged into one estimate.
  std::uint64_t repetitions = 1;
  std::uint64_t seed = 0;

  /// Δ/√K.
  double effective_delta() const;
  /// Throws PreconditionError if Δ <= 0 or K == 0.
  void validate() const;
};

/// true_mean + N(0, (Δ/√K)²). Not truncated to [-1, 1].
double sample_trace_estimate(double true_mean, const NoiseModel& noise, SampleStream& stream);
/// Convenience overload drawing from the stream (noise.seed, 0, 0).
double sample_trace_estimate(double true_mean, const NoiseModel& noise);

struct CosSinEstimate {
  double cos_hat = 0.0;
  std::optional<double> sin_hat;
  /// Propagated standard deviation of cos_hat (and of sin_hat when present).
  double effective_delta = 0.0;
};

/// Noisy estimate of tr[W† A W B] / tr[A²] by one DQC1 run per pair of
/// products (σ_μ from A, σ_μ' from B), each with independent noise, combined
/// linearly. The returned deviation is (Δ/√K)·√Σ(a_μ b_μ')² · 2^n / tr[A²].
struct OverlapEstimate {
  double value = 0.0;
  double exact = 0.0;
  double effective_delta = 0.0;
  std::size_t runs = 0;
};

OverlapEstimate overlap_estimate(const DenseOperator& w, const PauliSum& a, const PauliSum& b,
                                 const NoiseModel& noise, SampleStream& stream);
/// Noise-free tr[W† A W B] / tr[A²].
double overlap_mean(const DenseOperator& w, const PauliSum& a, const PauliSum& b);

enum class ProbePath {
  /// Appendix-style single-trace path: H1 is one product and exactly one
  /// term of H0 anticommutes with it. Signal frequency is |e^{μ,0}|.
  shortcut,
  /// Closed su(2) triple: L² runs per trace, signal frequency 1.
  l2_sum,
};

/// Measurement recipe for cos(2κθT) and sin(2κθT) given H0, H1, H2.
///
/// With W = exp(-iθH0T): cos = tr[W†H1WH1]/d and sin = -tr[W†H1WH2]/d,
/// d = tr[H1²]. The shortcut replaces H1 by σ1 and H2 by σ2 = -iσ_μσ1.
class Su2Probe {
 public:
  /// Throws PreconditionError when neither path applies.
  Su2Probe(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2);

  ProbePath path() const { return path_; }
  /// κ: the signal is cos(2κθT).
  double frequency_scale() const { return kappa_; }
  const PauliSum& h0() const { return h0_; }
  std::size_t num_qubits() const { return h0_.num_qubits(); }
  /// Runs per cos (or per sin) estimate.
  std::size_t runs_per_estimate() const;

  /// Noise-free cos and sin of 2κθT computed from the traces for evolution W.
  double exact_cos(const DenseOperator& w) const;
  double exact_sin(const DenseOperator& w) const;

  /// Noisy estimate using W = exp(-iθ·H0·t).
  CosSinEstimate estimate(double theta, double t, const NoiseModel& noise, bool want_sin,
                          SampleStream& stream) const;
  /// Noisy estimate for an arbitrary evolution W.
  CosSinEstimate estimate_for(const DenseOperator& w, const NoiseModel& noise, bool want_sin,
                              SampleStream& stream) const;

 private:
  PauliSum h0_;
  PauliSum cos_a_;
  PauliSum sin_b_;
  double sin_sign_ = 1.0;
  ProbePath path_ = ProbePath::l2_sum;
  double kappa_ = 1.0;
};

/// One cos (and optionally sin) estimate of 2κθT from noisy DQC1 runs.
CosSinEstimate estimate_cos_sin(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                                double theta_true, double t, const NoiseModel& noise,
                                bool want_sin, SampleStream& stream);

}  // namespace dqc1
