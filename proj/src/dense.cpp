#include "dqc1/dense.hpp"

#include <bit>
#include <cmath>

#include <fmt/core.h>

#include "dqc1/errors.hpp"

namespace dqc1 {
namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kDqc1UnitarityTolerance = 1e-8;

Eigen::Index dim_of(std::size_t num_qubits) { return Eigen::Index{1} << num_qubits; }

void require_square_same(const DenseOperator& a, const DenseOperator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError(fmt::format("{}: operand dimensions {}x{} and {}x{} differ", what,
                                     a.rows(), a.cols(), b.rows(), b.cols()));
  }
}

}  // namespace

void require_dense_size(std::size_t num_qubits) {
  if (num_qubits > kMaxDenseQubits) {
    throw ResourceLimitError(fmt::format("dense simulation is capped at {} qubits, requested {}",
                                         kMaxDenseQubits, num_qubits));
  }
}

DenseOperator identity_operator(std::size_t num_qubits) {
  require_dense_size(num_qubits);
  return DenseOperator::Identity(dim_of(num_qubits), dim_of(num_qubits));
}

DenseOperator to_matrix(const PauliProduct& p) {
  require_dense_size(p.num_qubits());
  const Eigen::Index dim = dim_of(p.num_qubits());
  DenseOperator m = DenseOperator::Zero(dim, dim);
  // P = i^k ∏ (site factor) and Y = i·X·Z, so P = i^{k + #Y} X^x Z^z.
  // Column b maps to row b ^ x with sign (-1)^{|b & z|}.
  const int y_count = std::popcount(p.x_mask() & p.z_mask());
  const std::complex<double> base = PauliProduct(p.num_qubits(), 0, 0, p.phase_exponent() + y_count).phase();
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const double sign = (std::popcount(ub & p.z_mask()) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(ub ^ p.x_mask()), b) = sign * base;
  }
  return m;
}

DenseOperator to_matrix(const PauliSum& h) {
  require_dense_size(h.num_qubits());
  const Eigen::Index dim = dim_of(h.num_qubits());
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coefficient * to_matrix(t.product);
  return m;
}

double unitarity_defect(const DenseOperator& u) {
  const DenseOperator r = u.adjoint() * u - DenseOperator::Identity(u.cols(), u.cols());
  return r.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const DenseOperator& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double spectral_norm(const DenseOperator& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<DenseOperator> svd(a);
  return svd.singularValues()(0);
}

DenseOperator matrix_power(const DenseOperator& a, std::uint64_t k) {
  if (a.rows() != a.cols()) throw DimensionError("matrix_power: operand is not square");
  DenseOperator result = DenseOperator::Identity(a.rows(), a.cols());
  DenseOperator base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// SpectralPropagator

SpectralPropagator::SpectralPropagator(const PauliSum& h) { decompose(to_matrix(h)); }

SpectralPropagator::SpectralPropagator(const DenseOperator& h) {
  if (h.rows() != h.cols()) throw DimensionError("SpectralPropagator: operator is not square");
  if (hermiticity_defect(h) > kHermitianTolerance) {
    throw PreconditionError("SpectralPropagator: operator is not Hermitian");
  }
  decompose(h);
}

void SpectralPropagator::decompose(const DenseOperator& h) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

DenseOperator SpectralPropagator::operator()(double angle) const {
  if (!std::isfinite(angle)) throw PreconditionError("evolve: angle must be finite");
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    phases(i) = std::polar(1.0, -angle * eigenvalues_(i));
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

DenseOperator evolve(const PauliProduct& p, double angle) {
  if (!p.is_hermitian()) throw PreconditionError("evolve: product is not Hermitian");
  if (!std::isfinite(angle)) throw PreconditionError("evolve: angle must be finite");
  const DenseOperator m = to_matrix(p);
  return std::cos(angle) * DenseOperator::Identity(m.rows(), m.cols()) -
         std::complex<double>(0.0, std::sin(angle)) * m;
}

DenseOperator evolve(const PauliSum& h, double angle) {
  require_dense_size(h.num_qubits());
  if (h.empty()) {
    if (!std::isfinite(angle)) throw PreconditionError("evolve: angle must be finite");
    return identity_operator(h.num_qubits());
  }
  if (h.size() == 1) return evolve(h[0].product, angle * h[0].coefficient);
  return SpectralPropagator(h)(angle);
}

TraceResult heisenberg_trace(const DenseOperator& w, const DenseOperator& a,
                             const DenseOperator& b) {
  require_square_same(w, a, "heisenberg_trace");
  require_square_same(w, b, "heisenberg_trace");
  const std::complex<double> value = (w.adjoint() * a * w * b).trace();
  return {value, value / static_cast<double>(w.rows())};
}

Dqc1Mean dqc1_mean(const DenseOperator& u) {
  if (u.rows() != u.cols()) throw DimensionError("dqc1_mean: operator is not square");
  const double defect = unitarity_defect(u);
  if (defect > kDqc1UnitarityTolerance) {
    throw PreconditionError(fmt::format("dqc1_mean: operator is not unitary (defect {:.3e})", defect));
  }
  const std::complex<double> t = u.trace() / static_cast<double>(u.rows());
  return {t.real(), t.imag()};
}

// ---------------------------------------------------------------------------
// Product formulas

void require_trotter_order(int order) {
  if (order != 2 && order != 3) {
    throw PreconditionError(fmt::format("unsupported product-formula order {} (use 2 or 3)", order));
  }
}

TrotterOracle::TrotterOracle(const PauliSum& h, const PauliProduct& sigma)
    : h_(h),
      h_nu_(decouple_hamiltonian(h, sigma)),
      sigma_(sigma),
      sigma_matrix_(to_matrix(sigma)),
      full_(h),
      decoupled_(DenseOperator(to_matrix(h_nu_))) {}

DenseOperator TrotterOracle::step(double tau, int order) const {
  require_trotter_order(order);
  if (!(tau > 0.0)) throw PreconditionError("trotter step length must be positive");
  if (order == 2) {
    const DenseOperator half = full_(tau / 2.0);
    return half * sigma_matrix_ * half * sigma_matrix_;
  }
  const DenseOperator quarter = full_(tau / 4.0);
  return quarter * sigma_matrix_ * full_(tau / 2.0) * sigma_matrix_ * quarter;
}

DenseOperator TrotterOracle::approximant(double total_t, std::uint64_t q, int order) const {
  if (q == 0) throw PreconditionError("slice count must be at least 1");
  return matrix_power(step(total_t / static_cast<double>(q), order), q);
}

DenseOperator TrotterOracle::exact(double total_t) const { return decoupled_(total_t); }

double TrotterOracle::error(double total_t, std::uint64_t q, int order) const {
  return spectral_norm(exact(total_t) - approximant(total_t, q, order));
}

DenseOperator trotter_step(const PauliSum& h, const PauliProduct& sigma, double eps_t, int order) {
  return TrotterOracle(h, sigma).step(eps_t, order);
}

double trotter_error(const PauliSum& h, const PauliProduct& sigma, double total_t,
                     std::uint64_t q, int order) {
  return TrotterOracle(h, sigma).error(total_t, q, order);
}

}  // namespace dqc1
