#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dqc1/dense.hpp"

namespace dqc1 {

/// Who applies a gate in a two-party protocol.
enum class Party { alice, bob };

enum class GateKind {
  /// 2x2 unitary on the ancilla only.
  ancilla,
  /// Probe unitary applied regardless of the ancilla state.
  probe,
  /// Probe unitary applied only on the ancilla |1> branch.
  controlled,
};

struct CircuitGate {
  GateKind kind = GateKind::probe;
  Party party = Party::alice;
  DenseOperator op;
  std::string label;
};

/// Gate list acting on one clean ancilla plus an n-qubit maximally mixed probe.
///
/// The ancilla is the most significant tensor factor of the (n+1)-qubit
/// register. Starts in |0><0| ⊗ 1/2^n.
class Dqc1Circuit {
 public:
  explicit Dqc1Circuit(std::size_t num_probe_qubits);

  Dqc1Circuit& hadamard();
  Dqc1Circuit& probe(const DenseOperator& u, Party party = Party::alice, std::string label = {});
  Dqc1Circuit& controlled(const DenseOperator& u, Party party = Party::alice,
                          std::string label = {});

  std::size_t num_probe_qubits() const { return num_probe_qubits_; }
  const std::vector<CircuitGate>& gates() const { return gates_; }
  /// True if any gate of the party is controlled by the ancilla.
  bool has_controlled(Party party) const;

 private:
  void push(GateKind kind, Party party, const DenseOperator& u, std::string label);

  std::size_t num_probe_qubits_;
  std::vector<CircuitGate> gates_;
};

struct CircuitOutcome {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_z = 0.0;
  /// Probe state after tracing out the ancilla.
  DenseOperator probe_state;
};

/// Density-matrix simulation of the full (n+1)-qubit register.
CircuitOutcome simulate(const Dqc1Circuit& circuit);

/// The trace circuit for tr[W† A W B]/2^n with only A and B controlled:
/// H on the ancilla, controlled B, W on the probe, controlled A.
Dqc1Circuit heisenberg_trace_circuit(const DenseOperator& w, const DenseOperator& a,
                                     const DenseOperator& b);

}  // namespace dqc1
