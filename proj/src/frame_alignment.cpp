#include "dqc1/frame_alignment.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"

namespace dqc1 {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStepTolerance = 1e-9;

}  // namespace

void FrameMisalignment::validate() const {
  if (!check_su2_triple(h0, h1, h2)) {
    throw PreconditionError(fmt::format("frame generators ({}; {}; {}) do not close su(2)",
                                        h0.to_string(), h1.to_string(), h2.to_string()));
  }
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(psi)) {
    throw PreconditionError("misalignment angles must be finite");
  }
}

DenseOperator bob_uniparametric_gate(const FrameMisalignment& mis) {
  return evolve(mis.h0, -mis.theta) * evolve(mis.h1, kPi / 2.0) * evolve(mis.h0, mis.theta);
}

DenseOperator euler_rotation(const FrameMisalignment& mis) {
  return evolve(mis.h2, mis.psi / 2.0) * evolve(mis.h1, mis.theta / 2.0) *
         evolve(mis.h2, mis.phi / 2.0);
}

DenseOperator bob_euler_gate(const FrameMisalignment& mis) {
  const DenseOperator r = euler_rotation(mis);
  return r.adjoint() * evolve(mis.h2, kPi / 2.0) * r;
}

DenseOperator elementary_step(const FrameMisalignment& mis) {
  if (mis.kind != MisalignmentKind::uniparametric) {
    throw PreconditionError("elementary_step needs a uniparametric misalignment");
  }
  mis.validate();
  const DenseOperator v = evolve(mis.h1, -kPi / 2.0) * bob_uniparametric_gate(mis);
  const double gap = (v - evolve(mis.h0, 2.0 * mis.theta)).cwiseAbs().maxCoeff();
  if (gap > kStepTolerance) {
    throw Error(fmt::format("elementary step deviates from exp(-2i theta H0) by {:.3e}", gap));
  }
  return v;
}

DenseOperator euler_step(const FrameMisalignment& mis) {
  if (mis.kind != MisalignmentKind::euler) {
    throw PreconditionError("euler_step needs an Euler-angle misalignment");
  }
  mis.validate();
  return evolve(mis.h2, -kPi / 2.0) * bob_euler_gate(mis);
}

Dqc1Circuit alignment_circuit(const FrameMisalignment& mis, std::uint64_t m, double phase_comp,
                              const PauliProduct& sigma_a, const PauliProduct& sigma_b) {
  mis.validate();
  const bool euler = mis.kind == MisalignmentKind::euler;
  const DenseOperator bob = euler ? bob_euler_gate(mis) : bob_uniparametric_gate(mis);
  const DenseOperator alice = euler ? evolve(mis.h2, -kPi / 2.0) : evolve(mis.h1, -kPi / 2.0);
  Dqc1Circuit circuit(mis.h0.num_qubits());
  circuit.hadamard().controlled(to_matrix(sigma_b), Party::alice, "sigma_b");
  if (!euler && phase_comp != 0.0) {
    circuit.probe(evolve(mis.h0, phase_comp), Party::alice, "compensation");
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    circuit.probe(bob, Party::bob, "bob").probe(alice, Party::alice, "alice");
  }
  circuit.controlled(to_matrix(sigma_a), Party::alice, "sigma_a");
  return circuit;
}

// ---------------------------------------------------------------------------
// AlignmentSignal

AlignmentSignal::AlignmentSignal(FrameMisalignment mis, NoiseModel noise)
    : mis_(std::move(mis)), noise_(noise) {
  noise_.validate();
  if (mis_.kind == MisalignmentKind::uniparametric) {
    step_ = elementary_step(mis_);
    probe_.emplace(mis_.h0, mis_.h1, mis_.h2);
  } else {
    step_ = euler_step(mis_);
  }
}

double AlignmentSignal::frequency_scale() const {
  return probe_ ? 2.0 * probe_->frequency_scale() : 1.0;
}

DenseOperator AlignmentSignal::evolution(std::uint64_t q, double phase_comp) const {
  DenseOperator w = matrix_power(step_, q);
  if (probe_) {
    // exp(-i(φ/κ)H0) adds exactly 2φ to the measured phase.
    w = w * evolve(mis_.h0, phase_comp / probe_->frequency_scale());
  } else if (phase_comp != 0.0) {
    throw PreconditionError("the Euler protocol has no compensation gate; phase must be 0");
  }
  return w;
}

double AlignmentSignal::exact(std::uint64_t q, double phase_comp) const {
  const DenseOperator w = evolution(q, phase_comp);
  return probe_ ? probe_->exact_cos(w) : overlap_mean(w, mis_.h2, mis_.h2);
}

double AlignmentSignal::cosine(std::uint64_t q, double phase_comp, SampleStream& stream,
                               double* likelihood_delta) const {
  const DenseOperator w = evolution(q, phase_comp);
  if (probe_) {
    const CosSinEstimate e = probe_->estimate_for(w, noise_, false, stream);
    if (likelihood_delta) *likelihood_delta = e.effective_delta;
    return e.cos_hat;
  }
  const OverlapEstimate e = overlap_estimate(w, mis_.h2, mis_.h2, noise_, stream);
  if (likelihood_delta) *likelihood_delta = e.effective_delta;
  return e.value;
}

double draw_alignment_prior(const FrameMisalignment& mis, const BlackBoxPolicy& policy,
                            SampleStream& stream) {
  const AlignmentSignal probe_scale(mis, NoiseModel{});
  return draw_discrete_prior(mis.theta, policy, stream, probe_scale.frequency_scale());
}

RunRecord align(const FrameMisalignment& mis, const BlackBoxPolicy& policy,
                const NoiseModel& noise, std::uint64_t trial) {
  const AlignmentSignal signal(mis, noise);
  BlackBoxPolicy effective = policy;
  if (mis.kind == MisalignmentKind::euler) effective.compensate = false;
  const StreamKey key{noise.seed, trial, 0};
  SampleStream prior_stream(key);
  const double theta0 =
      draw_discrete_prior(mis.theta, effective, prior_stream, signal.frequency_scale());
  RunRecord rec = run_discrete(signal, theta0, effective, key);
  rec.theta_true = mis.theta;
  return rec;
}

}  // namespace dqc1
