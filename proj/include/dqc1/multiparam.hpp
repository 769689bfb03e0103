#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dqc1/bayes_continuous.hpp"
#include "dqc1/dense.hpp"
#include "dqc1/measurement.hpp"
#include "dqc1/pauli.hpp"
#include "dqc1/run_record.hpp"

namespace dqc1 {

struct MultiTerm {
  double theta = 0.0;
  PauliProduct sigma;
};

/// H = Σ_ν θ^ν σ_ν with pairwise-distinct phase-free products.
struct MultiHamiltonian {
  std::vector<MultiTerm> terms;
  /// Prior means θ̂_0^ν; empty when priors are drawn per trial.
  std::vector<double> prior_means;

  std::size_t num_qubits() const;
  std::size_t size() const { return terms.size(); }
  PauliSum hamiltonian() const;
  /// Throws PreconditionError on duplicates, phases or mixed qubit counts.
  void validate() const;
};

/// Lowest-weight product σ with [σ_ν, σ] = 0 and {σ_ν', σ} = 0 for ν' ≠ ν,
/// enumerated by weight then lexicographically over {X, Y, Z}. The identity
/// is returned when P = 1.
PauliProduct select_decoupler(const MultiHamiltonian& h, std::size_t nu,
                              std::uint64_t search_budget = std::uint64_t{1} << 22);

/// Lowest-weight product anticommuting with σ_ν: the measured σ_1 of the
/// single-trace circuit (its partner is σ_2 = -iσ_νσ_1).
PauliProduct probe_partner(const MultiHamiltonian& h, std::size_t nu);

struct TrotterPlan {
  /// Local error exponent, 2 or 3.
  int order = 2;
  /// Fixed slice count q per evolution when epsilon_target is unset.
  std::uint64_t slices = 1;
  PauliProduct decoupler;
  /// When set, every evolution uses the fewest slices with 2·error <= target.
  std::optional<double> epsilon_target;
  /// Upper bound for the slice search.
  std::uint64_t max_slices = std::uint64_t{1} << 26;

  void validate() const;
};

/// Fewest slices q with 2·error(T, q) <= epsilon_target, by doubling then bisection.
std::uint64_t minimal_slices(const TrotterOracle& oracle, double t, int order,
                             double epsilon_target, std::uint64_t max_slices);

struct TrotterizedMean {
  /// tr[S̄†σ1S̄σ1]/2^n.
  double mean = 0.0;
  /// mean - cos(2θ^νT), ground truth bias.
  double gamma = 0.0;
  /// ε = 2·‖S_ν(T) - S̄_ν(T)‖.
  double epsilon = 0.0;
  std::uint64_t slices = 0;
};

TrotterizedMean trotterized_measurement_mean(const MultiHamiltonian& h, std::size_t nu,
                                             const TrotterPlan& plan, const PauliProduct& sigma1,
                                             double t);

/// Bias prior of the product-formula measurement: Δ_γ = Δ·ε, Δ' = √(Δ² + Δ_γ²).
struct GammaPrior {
  double epsilon = 0.0;
  double delta_gamma = 0.0;
  double inflated_delta = 0.0;
};

GammaPrior gamma_prior(double delta, double epsilon);
/// ε measured at (T, q, p) from the oracle.
GammaPrior gamma_prior(const TrotterOracle& oracle, const TrotterPlan& plan, double t,
                       double delta);

/// Noisy signal cos(2θ^νt) realized with the product formula, with the
/// likelihood std inflated to Δ'.
class TrotterSignal final : public PhaseSignal {
 public:
  TrotterSignal(const MultiHamiltonian& h, std::size_t nu, TrotterPlan plan, NoiseModel noise);

  SignalSample cosine(double t, SampleStream& stream) const override;
  SignalSample sine(double t, SampleStream& stream) const override;

 private:
  SignalSample measure(double t, bool sine, SampleStream& stream) const;

  double theta_;
  TrotterPlan plan_;
  NoiseModel noise_;
  TrotterOracle oracle_;
  DenseOperator sigma1_;
  DenseOperator sigma2_;
};

/// One continuous run per ν, each with its own decoupler and trial stream.
/// Priors come from h.prior_means when given, otherwise from draw_continuous_prior.
std::vector<RunRecord> estimate_all(const MultiHamiltonian& h, const std::vector<TrotterPlan>& plans,
                                    const ZoomPolicy& policy, const NoiseModel& noise,
                                    std::uint64_t trial);

/// Default plan for ν: select_decoupler with the given order and ε target.
TrotterPlan default_plan(const MultiHamiltonian& h, std::size_t nu, int order,
                         double epsilon_target);

}  // namespace dqc1
