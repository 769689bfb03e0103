#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dqc1/dense.hpp"
#include "dqc1/measurement.hpp"

namespace dqc1 {

/// Structure of the Q+1 interleaving unitaries W_0..W_Q on ancilla + probe.
enum class InterleaveKind {
  /// Seeded Haar-random unitaries on the full (n+1)-qubit register.
  haar,
  /// W_i = 1: the oracle never touches the ancilla signal.
  identity,
  /// H on the ancilla, then a controlled shift of the probe index by 2^{n-1};
  /// between calls the probe index is shifted by +1, and W_Q undoes all
  /// shifts before a final H. Each call then stamps relative phases on two
  /// distinct basis states of the two ancilla branches.
  offset_shift,
};

/// Distinguish U_B = exp(iθ|S><S|) from U_B = 1 with Q calls.
struct SearchInstance {
  std::size_t n = 4;
  std::uint64_t s_index = 0;
  double theta = 1.0;
  std::size_t q_calls = 1;
  InterleaveKind interleave = InterleaveKind::haar;
  /// Seed of the Haar interleaves.
  std::uint64_t seed = 0;

  void validate() const;
};

/// Largest probe size accepted by the dense search simulation.
inline constexpr std::size_t kMaxSearchQubits = 10;

/// <σz^a> of the final register with ρ_0 = |0><0| ⊗ 1/2^n, for U_B = 1
/// (oracle_on = false) or U_B = exp(iθ|S><S|).
double ancilla_z(const SearchInstance& inst, bool oracle_on);

/// |<σz^a>_{U_B=1} - <σz^a>_{U_B=exp(iθ|S><S|)}|.
double signal_separation(const SearchInstance& inst);

/// 4Q/2^{n+1}.
double separation_bound(std::size_t n, std::size_t q_calls);

/// Haar-random unitary of the given dimension (QR of a complex Ginibre
/// matrix with the R-diagonal phases removed).
DenseOperator haar_unitary(Eigen::Index dim, std::uint64_t seed, std::uint64_t index);

struct DetectionResources {
  bool reachable = false;
  /// Smallest J with Δ/√J < separation.
  std::uint64_t j_needed = 0;
  /// J·Q.
  std::uint64_t n_total = 0;
  double separation = 0.0;
};

DetectionResources detection_resources(double separation, std::size_t q_calls,
                                       const NoiseModel& noise);
DetectionResources detection_resources(const SearchInstance& inst, const NoiseModel& noise);

/// Row of a resource sweep: Q chosen among powers of two up to 2^{n-1}
/// to minimize N_total.
struct SweepPoint {
  std::size_t n = 0;
  std::size_t q_calls = 0;
  double separation = 0.0;
  double bound = 0.0;
  std::uint64_t j_needed = 0;
  std::uint64_t n_total = 0;
};

SweepPoint optimal_detection(std::size_t n, double theta, InterleaveKind interleave,
                             const NoiseModel& noise, std::uint64_t s_index = 0);

}  // namespace dqc1
