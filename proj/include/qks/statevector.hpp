#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qks {

using cdouble = std::complex<double>;

enum class GateKind { RX, RY, CX, CZ };

struct Gate {
    GateKind kind;
    int q0 = 0;           // target for rotations; control for CX; first qubit for CZ
    int q1 = -1;          // second qubit for CX/CZ
    double angle = 0.0;   // rotations only
};

inline bool is_rotation(GateKind k) { return k == GateKind::RX || k == GateKind::RY; }

// n-qubit pure state, little-endian: qubit 0 is the least significant bit of
// the amplitude index.
struct StateVector {
    int n_qubits = 0;
    std::vector<cdouble> amplitudes;

    static StateVector zero_state(int n) {
        StateVector sv;
        sv.n_qubits = n;
        sv.amplitudes.assign(std::size_t{1} << n, cdouble{0.0, 0.0});
        sv.amplitudes[0] = cdouble{1.0, 0.0};
        return sv;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

// Applies the gate in place. Rotation matrices:
//   RX(t) = [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]]
//   RY(t) = [[cos(t/2), -sin(t/2)],   [sin(t/2),  cos(t/2)]]
// CX flips the target when the control bit is set; CZ negates |11>.
void apply_gate(StateVector& state, const Gate& g);

// |<a|b>|^2
double fidelity_exact(const StateVector& a, const StateVector& b);

}  // namespace qks
