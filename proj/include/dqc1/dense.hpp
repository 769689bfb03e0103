#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "dqc1/pauli.hpp"

namespace dqc1 {

/// Dense 2^n x 2^n complex matrix; the ground-truth representation for n <= 12.
using DenseOperator = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDenseQubits = 12;

/// Throws ResourceLimitError when n exceeds the dense cap.
void require_dense_size(std::size_t num_qubits);

DenseOperator identity_operator(std::size_t num_qubits);

/// Exact matrix realization; products are built as phased permutation matrices.
DenseOperator to_matrix(const PauliProduct& p);
DenseOperator to_matrix(const PauliSum& h);

/// max_ij |(U†U - 1)_ij|.
double unitarity_defect(const DenseOperator& u);
/// max_ij |(A - A†)_ij|.
double hermiticity_defect(const DenseOperator& a);
/// Largest singular value.
double spectral_norm(const DenseOperator& a);
/// Binary exponentiation, a^k with a^0 = 1.
DenseOperator matrix_power(const DenseOperator& a, std::uint64_t k);

/// exp(-i·angle·H) for a fixed Hermitian H, reusing one eigendecomposition.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const PauliSum& h);
  /// General Hermitian matrix; throws PreconditionError if not Hermitian to 1e-12.
  explicit SpectralPropagator(const DenseOperator& h);

  DenseOperator operator()(double angle) const;
  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues_.size()); }

 private:
  void decompose(const DenseOperator& h);

  Eigen::VectorXd eigenvalues_;
  DenseOperator eigenvectors_;
};

/// exp(-i·angle·H). Single-product sums use cos(a·e)·1 - i·sin(a·e)·P.
DenseOperator evolve(const PauliSum& h, double angle);
/// exp(-i·angle·P) = cos(angle)·1 - i·sin(angle)·P for a Hermitian product.
DenseOperator evolve(const PauliProduct& p, double angle);

struct TraceResult {
  std::complex<double> value;
  /// value / dim.
  std::complex<double> normalized;
};

/// tr[W† A W B] and its normalization by the dimension.
TraceResult heisenberg_trace(const DenseOperator& w, const DenseOperator& a,
                             const DenseOperator& b);

struct Dqc1Mean {
  double mean_x = 0.0;
  double mean_y = 0.0;
};

/// Ancilla expectations of the trace circuit: Re and Im of tr[U]/dim.
/// Throws PreconditionError when U deviates from unitarity by more than 1e-8.
Dqc1Mean dqc1_mean(const DenseOperator& u);

/// Product-formula realization of the decoupled evolution S_ν = exp(-i H_ν T),
/// H_ν = (H + σHσ)/2, from the available gates exp(-iHt) and σ.
///
/// order 2: e^{-iHτ/2} σ e^{-iHτ/2} σ
/// order 3: e^{-iHτ/4} σ e^{-iHτ/2} σ e^{-iHτ/4}
/// The order is the exponent of the local (one-step) error.
class TrotterOracle {
 public:
  TrotterOracle(const PauliSum& h, const PauliProduct& sigma);

  DenseOperator step(double tau, int order) const;
  /// [step(T/q)]^q.
  DenseOperator approximant(double total_t, std::uint64_t q, int order) const;
  DenseOperator exact(double total_t) const;
  /// Spectral-norm distance ‖S_ν(T) - [S̄_ν(T/q)]^q‖.
  double error(double total_t, std::uint64_t q, int order) const;

  const PauliSum& hamiltonian() const { return h_; }
  const PauliSum& decoupled() const { return h_nu_; }
  const PauliProduct& sigma() const { return sigma_; }

 private:
  PauliSum h_;
  PauliSum h_nu_;
  PauliProduct sigma_;
  DenseOperator sigma_matrix_;
  SpectralPropagator full_;
  SpectralPropagator decoupled_;
};

/// Throws PreconditionError unless order is 2 or 3.
void require_trotter_order(int order);

DenseOperator trotter_step(const PauliSum& h, const PauliProduct& sigma, double eps_t, int order);
double trotter_error(const PauliSum& h, const PauliProduct& sigma, double total_t,
                     std::uint64_t q, int order);

}  // namespace dqc1
