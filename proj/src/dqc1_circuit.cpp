#include "dqc1/dqc1_circuit.hpp"

#include <cmath>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"

namespace dqc1 {

Dqc1Circuit::Dqc1Circuit(std::size_t num_probe_qubits) : num_probe_qubits_(num_probe_qubits) {
  // One extra qubit for the ancilla.
  require_dense_size(num_probe_qubits + 1);
}

void Dqc1Circuit::push(GateKind kind, Party party, const DenseOperator& u, std::string label) {
  const Eigen::Index expected = kind == GateKind::ancilla ? 2 : (Eigen::Index{1} << num_probe_qubits_);
  if (u.rows() != expected || u.cols() != expected) {
    throw DimensionError(fmt::format("circuit gate '{}' is {}x{}, expected {}x{}", label, u.rows(),
                                     u.cols(), expected, expected));
  }
  gates_.push_back({kind, party, u, std::move(label)});
}

Dqc1Circuit& Dqc1Circuit::hadamard() {
  DenseOperator h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  push(GateKind::ancilla, Party::alice, h, "H");
  return *this;
}

Dqc1Circuit& Dqc1Circuit::probe(const DenseOperator& u, Party party, std::string label) {
  push(GateKind::probe, party, u, std::move(label));
  return *this;
}

Dqc1Circuit& Dqc1Circuit::controlled(const DenseOperator& u, Party party, std::string label) {
  push(GateKind::controlled, party, u, std::move(label));
  return *this;
}

bool Dqc1Circuit::has_controlled(Party party) const {
  for (const auto& g : gates_) {
    if (g.kind == GateKind::controlled && g.party == party) return true;
  }
  return false;
}

CircuitOutcome simulate(const Dqc1Circuit& circuit) {
  const Eigen::Index d = Eigen::Index{1} << circuit.num_probe_qubits();
  const Eigen::Index big = 2 * d;
  DenseOperator rho = DenseOperator::Zero(big, big);
  rho.topLeftCorner(d, d) = DenseOperator::Identity(d, d) / static_cast<double>(d);

  for (const auto& g : circuit.gates()) {
    DenseOperator u = DenseOperator::Zero(big, big);
    switch (g.kind) {
      case GateKind::ancilla:
        for (Eigen::Index r = 0; r < 2; ++r) {
          for (Eigen::Index c = 0; c < 2; ++c) {
            u.block(r * d, c * d, d, d) = g.op(r, c) * DenseOperator::Identity(d, d);
          }
        }
        break;
      case GateKind::probe:
        u.topLeftCorner(d, d) = g.op;
        u.bottomRightCorner(d, d) = g.op;
        break;
      case GateKind::controlled:
        u.topLeftCorner(d, d) = DenseOperator::Identity(d, d);
        u.bottomRightCorner(d, d) = g.op;
        break;
    }
    rho = u * rho * u.adjoint();
  }

  CircuitOutcome out;
  const std::complex<double> off = rho.bottomLeftCorner(d, d).trace();
  // tr[ρ σx] = 2 Re ρ10 and tr[ρ σy] = 2 Im ρ10 with ρ10 the |1><0| block trace.
  out.sigma_x = 2.0 * off.real();
  out.sigma_y = 2.0 * off.imag();
  out.sigma_z = (rho.topLeftCorner(d, d).trace() - rho.bottomRightCorner(d, d).trace()).real();
  out.probe_state = rho.topLeftCorner(d, d) + rho.bottomRightCorner(d, d);
  return out;
}

Dqc1Circuit heisenberg_trace_circuit(const DenseOperator& w, const DenseOperator& a,
                                     const DenseOperator& b) {
  if (w.rows() != a.rows() || w.rows() != b.rows()) {
    throw DimensionError("heisenberg_trace_circuit: operand dimensions differ");
  }
  const auto n = static_cast<std::size_t>(std::llround(std::log2(static_cast<double>(w.rows()))));
  Dqc1Circuit circuit(n);
  circuit.hadamard().controlled(b, Party::alice, "B").probe(w, Party::alice, "W").controlled(
      a, Party::alice, "A");
  return circuit;
}

}  // namespace dqc1
