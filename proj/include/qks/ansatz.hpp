#pragma once

#include <span>
#include <string>
#include <vector>

#include "qks/statevector.hpp"

namespace qks {

// One gate position in a circuit template. Rotations carry the index of the
// input feature that sets their angle (angle = bandwidth * x[param_slot]).
struct GateSlot {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;
    int param_slot = -1;  // -1 for entangling gates
};

struct CircuitSpec {
    int n_qubits = 0;
    int n_params = 0;
    double bandwidth = 1.0;
    std::vector<GateSlot> layout;

    std::string to_json() const;
    static CircuitSpec from_json(const std::string& text);
};

// Data-encoding ansatz: L = n_params/n_qubits rotation layers; layer l uses
// RX when l is even, RY when odd, parameter slot l*n+q on qubit q. Between
// consecutive rotation layers, a linear-chain entangling layer on (q, q+1)
// for q = 0..n-2, CZ after even-indexed rotation layers and CX after odd.
CircuitSpec build_ansatz(int n_qubits, int n_params, double bandwidth);

// Applies the bound circuit to |0...0>. length(x) must equal n_params.
StateVector encode(const CircuitSpec& spec, std::span<const double> x);

// Bound gate list for encode(x); exposed so noisy/shot executions can walk
// the same sequence.
std::vector<Gate> bind_gates(const CircuitSpec& spec, std::span<const double> x);

// Gate list of the inversion-test circuit: encode(x) followed by the exact
// inverse of encode(y) (layout reversed, rotation angles negated).
std::vector<Gate> bind_inversion_gates(const CircuitSpec& spec, std::span<const double> x,
                                       std::span<const double> y);

}  // namespace qks
