#include "dqc1/search_bound.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"
#include "dqc1/sampling.hpp"

namespace dqc1 {
namespace {

// The register state is carried as M = (chain)·[1_d; 0], a 2d x d matrix whose
// columns are the evolved |0>|s>; then <σz^a> = (‖top‖² - ‖bottom‖²)/d.
using Columns = Eigen::MatrixXcd;

void apply_ancilla_hadamard(Columns& m, Eigen::Index d) {
  const double s = 1.0 / std::sqrt(2.0);
  const Columns top = m.topRows(d);
  const Columns bottom = m.bottomRows(d);
  m.topRows(d) = s * (top + bottom);
  m.bottomRows(d) = s * (top - bottom);
}

// Probe index s -> s + shift (mod d) on the selected branches.
void apply_shift(Columns& m, Eigen::Index d, std::int64_t shift, bool top, bool bottom) {
  const auto rotate = [&](Eigen::Index offset) {
    const Columns block = m.middleRows(offset, d);
    for (Eigen::Index s = 0; s < d; ++s) {
      const Eigen::Index to = static_cast<Eigen::Index>(
          ((static_cast<std::int64_t>(s) + shift) % static_cast<std::int64_t>(d) + d) % d);
      m.row(offset + to) = block.row(s);
    }
  };
  if (top) rotate(0);
  if (bottom) rotate(d);
}

void apply_oracle(Columns& m, Eigen::Index d, std::uint64_t s_index, double theta) {
  const std::complex<double> phase = std::polar(1.0, theta);
  const auto s = static_cast<Eigen::Index>(s_index);
  m.row(s) *= phase;
  m.row(d + s) *= phase;
}

void apply_interleave(Columns& m, const SearchInstance& inst, std::size_t i) {
  const auto d = Eigen::Index{1} << inst.n;
  switch (inst.interleave) {
    case InterleaveKind::identity:
      return;
    case InterleaveKind::haar:
      m = haar_unitary(2 * d, inst.seed, i) * m;
      return;
    case InterleaveKind::offset_shift: {
      const auto half = static_cast<std::int64_t>(d / 2);
      if (i == 0) {
        apply_ancilla_hadamard(m, d);
        apply_shift(m, d, half, false, true);
      } else if (i < inst.q_calls) {
        apply_shift(m, d, 1, true, true);
      } else {
        apply_shift(m, d, -static_cast<std::int64_t>(inst.q_calls - 1), true, true);
        apply_shift(m, d, -half, false, true);
        apply_ancilla_hadamard(m, d);
      }
      return;
    }
  }
}

}  // namespace

void SearchInstance::validate() const {
  if (n == 0 || n > kMaxSearchQubits) {
    throw ResourceLimitError(fmt::format("search simulation supports 1..{} probe qubits, got {}",
                                         kMaxSearchQubits, n));
  }
  if (s_index >= (std::uint64_t{1} << n)) {
    throw PreconditionError(fmt::format("marked index {} out of range for n = {}", s_index, n));
  }
  if (!std::isfinite(theta)) throw PreconditionError("oracle phase must be finite");
  if (interleave == InterleaveKind::offset_shift && n < 2) {
    throw PreconditionError("offset_shift interleave needs n >= 2");
  }
}

namespace {

// Column-major complex Ginibre matrix; the first k columns use the first
// draws of the stream, so a prefix of columns matches the full matrix.
DenseOperator ginibre(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                      std::uint64_t index) {
  SampleStream stream(StreamKey{seed, index, 0x4a3f});
  const double s = 1.0 / std::sqrt(2.0);
  DenseOperator g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = stream.normal();
      const double im = stream.normal();
      g(r, c) = std::complex<double>(s * re, s * im);
    }
  }
  return g;
}

// Phases of the R diagonal; W = Q·diag(phases) is Haar distributed.
Eigen::VectorXcd r_phases(const DenseOperator& qr_matrix, Eigen::Index cols) {
  Eigen::VectorXcd ph(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::complex<double> diag = qr_matrix(c, c);
    const double mag = std::abs(diag);
    ph(c) = mag > 0.0 ? diag / mag : 1.0;
  }
  return ph;
}

// m <- W·m without forming W: scale rows by the phases, then apply the
// Householder reflections.
void apply_haar(Columns& m, std::uint64_t seed, std::uint64_t index) {
  const Eigen::Index dim = m.rows();
  const Eigen::HouseholderQR<DenseOperator> qr(ginibre(dim, dim, seed, index));
  m = r_phases(qr.matrixQR(), dim).asDiagonal() * m;
  m.applyOnTheLeft(qr.householderQ());
}

// First `cols` columns of haar_unitary(dim, seed, index).
Columns haar_isometry(Eigen::Index dim, Eigen::Index cols, std::uint64_t seed,
                      std::uint64_t index) {
  const Eigen::HouseholderQR<DenseOperator> qr(ginibre(dim, cols, seed, index));
  Columns q = qr.householderQ() * Columns::Identity(dim, cols);
  return q * r_phases(qr.matrixQR(), cols).asDiagonal();
}

}  // namespace

DenseOperator haar_unitary(Eigen::Index dim, std::uint64_t seed, std::uint64_t index) {
  const Eigen::HouseholderQR<DenseOperator> qr(ginibre(dim, dim, seed, index));
  DenseOperator q = qr.householderQ();
  return q * r_phases(qr.matrixQR(), dim).asDiagonal();
}

namespace {

// Propagates the oracle-off and oracle-on registers together so that each
// Haar interleave is drawn once; for Haar interleaves the two are stacked
// side by side in one 2d x 2d block.
std::pair<double, double> ancilla_z_both(const SearchInstance& inst) {
  inst.validate();
  const auto d = Eigen::Index{1} << inst.n;
  const auto z = [&](const auto& m) {
    return (m.topRows(d).squaredNorm() - m.bottomRows(d).squaredNorm()) / static_cast<double>(d);
  };
  if (inst.interleave == InterleaveKind::haar) {
    const Columns first = haar_isometry(2 * d, d, inst.seed, 0);
    Columns both(2 * d, 2 * d);
    both.leftCols(d) = first;
    both.rightCols(d) = first;
    for (std::size_t i = 1; i <= inst.q_calls; ++i) {
      Columns on = both.rightCols(d);
      apply_oracle(on, d, inst.s_index, inst.theta);
      both.rightCols(d) = on;
      apply_haar(both, inst.seed, i);
    }
    return {z(both.leftCols(d)), z(both.rightCols(d))};
  }
  Columns off = Columns::Zero(2 * d, d);
  off.topRows(d) = Columns::Identity(d, d);
  Columns on = off;
  for (std::size_t i = 0; i <= inst.q_calls; ++i) {
    apply_interleave(off, inst, i);
    apply_interleave(on, inst, i);
    if (i < inst.q_calls) apply_oracle(on, d, inst.s_index, inst.theta);
  }
  return {z(off), z(on)};
}

}  // namespace

double ancilla_z(const SearchInstance& inst, bool oracle_on) {
  const auto [off, on] = ancilla_z_both(inst);
  return oracle_on ? on : off;
}

double signal_separation(const SearchInstance& inst) {
  const auto [off, on] = ancilla_z_both(inst);
  return std::abs(off - on);
}

double separation_bound(std::size_t n, std::size_t q_calls) {
  return 4.0 * static_cast<double>(q_calls) / std::ldexp(1.0, static_cast<int>(n) + 1);
}

DetectionResources detection_resources(double separation, std::size_t q_calls,
                                       const NoiseModel& noise) {
  noise.validate();
  DetectionResources out;
  out.separation = separation;
  if (!(separation > 0.0)) return out;
  const double ratio = noise.delta / separation;
  const double j = std::floor(ratio * ratio) + 1.0;
  if (j > 1e18) return out;
  out.reachable = true;
  out.j_needed = static_cast<std::uint64_t>(j);
  // Rounding guard: enforce Δ/√J < separation exactly.
  while (noise.delta / std::sqrt(static_cast<double>(out.j_needed)) >= separation) ++out.j_needed;
  while (out.j_needed > 1 &&
         noise.delta / std::sqrt(static_cast<double>(out.j_needed - 1)) < separation) {
    --out.j_needed;
  }
  out.n_total = out.j_needed * q_calls;
  return out;
}

DetectionResources detection_resources(const SearchInstance& inst, const NoiseModel& noise) {
  return detection_resources(signal_separation(inst), inst.q_calls, noise);
}

SweepPoint optimal_detection(std::size_t n, double theta, InterleaveKind interleave,
                             const NoiseModel& noise, std::uint64_t s_index) {
  SweepPoint best;
  const std::size_t q_max = std::size_t{1} << (n - 1);
  for (std::size_t q = 1; q <= q_max; q *= 2) {
    SearchInstance inst;
    inst.n = n;
    inst.s_index = s_index;
    inst.theta = theta;
    inst.q_calls = q;
    inst.interleave = interleave;
    const DetectionResources r = detection_resources(inst, noise);
    if (!r.reachable) continue;
    if (best.n_total == 0 || r.n_total < best.n_total) {
      best = {n, q, r.separation, separation_bound(n, q), r.j_needed, r.n_total};
    }
  }
  if (best.n_total == 0) {
    throw PreconditionError(fmt::format("no query count up to {} separates the oracles at n = {}",
                                        q_max, n));
  }
  return best;
}

}  // namespace dqc1
