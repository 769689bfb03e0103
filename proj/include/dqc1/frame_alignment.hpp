#pragma once

#include <cstdint>
#include <optional>

#include "dqc1/blackbox_discrete.hpp"
#include "dqc1/dense.hpp"
#include "dqc1/dqc1_circuit.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/pauli.hpp"
#include "dqc1/run_record.hpp"

namespace dqc1 {

enum class MisalignmentKind { uniparametric, euler };

/// Hidden relation between Alice's and Bob's frames.
///
/// uniparametric: Bob's generators are V_θ† H V_θ with V_θ = exp(-iθH0).
/// euler: Bob's operators are R† A R with
///   R = exp(-iψH2/2)·exp(-iθH1/2)·exp(-iφH2/2),
/// (φ, θ, ψ) being rotation angles; with this half-angle convention the
/// exchange step V' satisfies tr[V'^†m H2 V'^m H2] = d·cos(2mθ).
struct FrameMisalignment {
  MisalignmentKind kind = MisalignmentKind::uniparametric;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  PauliSum h0;
  PauliSum h1;
  PauliSum h2;

  /// Throws PreconditionError unless (H0, H1, H2) closes su(2).
  void validate() const;
};

/// Bob's gate exp(-iπH1^B/2) = exp(iθH0)·exp(-iπH1/2)·exp(-iθH0).
DenseOperator bob_uniparametric_gate(const FrameMisalignment& mis);
/// Bob's gate exp(-iπH2^B/2) = R†·exp(-iπH2/2)·R.
DenseOperator bob_euler_gate(const FrameMisalignment& mis);
DenseOperator euler_rotation(const FrameMisalignment& mis);

/// exp(iπH1/2)·exp(iθH0)·exp(-iπH1/2)·exp(-iθH0); checked against
/// exp(-2iθH0) to 1e-9 (Error on mismatch).
DenseOperator elementary_step(const FrameMisalignment& mis);

/// V' = exp(iπH2/2)·R†·exp(-iπH2/2)·R.
DenseOperator euler_step(const FrameMisalignment& mis);

/// Probe round trips consumed; one elementary step is one exchange.
struct ExchangeBudget {
  std::uint64_t exchanges_used = 0;
  void charge(std::uint64_t m) { exchanges_used += m; }
};

/// DQC1 circuit with m exchanges: H on the ancilla, controlled σ_b (Alice),
/// optional compensation exp(-iφH0) (Alice), m × [Bob gate, Alice gate] with
/// neither controlled, then controlled σ_a (Alice).
Dqc1Circuit alignment_circuit(const FrameMisalignment& mis, std::uint64_t m, double phase_comp,
                              const PauliProduct& sigma_a, const PauliProduct& sigma_b);

/// Discrete-time signal of the exchange protocol.
///
/// uniparametric: W = (V_2θ)^m·exp(-iφH0) probed with (H0, H1, H2); the
/// estimated frequency is ϑ = 2θ (frequency scale 2).
/// euler: W = V'^m probed with H2 alone; cos(2mθ), no compensation.
class AlignmentSignal final : public PowerSignal {
 public:
  AlignmentSignal(FrameMisalignment mis, NoiseModel noise);
  double cosine(std::uint64_t q, double phase_comp, SampleStream& stream,
                double* likelihood_delta) const override;
  double frequency_scale() const override;

  /// Noise-free signal mean for power q and compensation φ.
  double exact(std::uint64_t q, double phase_comp) const;

 private:
  DenseOperator evolution(std::uint64_t q, double phase_comp) const;

  FrameMisalignment mis_;
  NoiseModel noise_;
  DenseOperator step_;
  std::optional<Su2Probe> probe_;
};

/// Runs the discrete estimator with W_B := elementary_step (or euler_step)
/// and q_l := m_l; RunRecord::total_calls is the exchange count Σm_l.
/// The Euler kind forces the uncompensated schedule.
RunRecord align(const FrameMisalignment& mis, const BlackBoxPolicy& policy,
                const NoiseModel& noise, std::uint64_t trial);

/// Prior mean for align with the discrete calibration convention applied to
/// the estimated frequency (2θ for uniparametric, θ for euler).
double draw_alignment_prior(const FrameMisalignment& mis, const BlackBoxPolicy& policy,
                            SampleStream& stream);

}  // namespace dqc1
