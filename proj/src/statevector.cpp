#include "qks/statevector.hpp"

#include <cmath>

#include "qks/common.hpp"

namespace qks {

namespace {

void check_qubit(const StateVector& s, int q) {
    if (q < 0 || q >= s.n_qubits)
        throw ComputeError("gate qubit index " + std::to_string(q) + " out of range for " +
                           std::to_string(s.n_qubits) + " qubits");
}

// u00..u11 act on the (q=0, q=1) amplitude pairs of one qubit
void apply_1q(StateVector& s, int q, cdouble u00, cdouble u01, cdouble u10, cdouble u11) {
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t dim = s.amplitudes.size();
    cdouble* a = s.amplitudes.data();
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        cdouble a0 = a[base];
        cdouble a1 = a[base | bit];
        a[base] = u00 * a0 + u01 * a1;
        a[base | bit] = u10 * a0 + u11 * a1;
    }
}

}  // namespace

void apply_gate(StateVector& state, const Gate& g) {
    check_qubit(state, g.q0);
    switch (g.kind) {
        case GateKind::RX: {
            double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
            apply_1q(state, g.q0, {c, 0}, {0, -s}, {0, -s}, {c, 0});
            break;
        }
        case GateKind::RY: {
            double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
            apply_1q(state, g.q0, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
            break;
        }
        case GateKind::CX: {
            check_qubit(state, g.q1);
            if (g.q0 == g.q1) throw ComputeError("CX control equals target");
            const std::size_t cbit = std::size_t{1} << g.q0;
            const std::size_t tbit = std::size_t{1} << g.q1;
            const std::size_t dim = state.amplitudes.size();
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & cbit) && !(i & tbit)) std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
            }
            break;
        }
        case GateKind::CZ: {
            check_qubit(state, g.q1);
            if (g.q0 == g.q1) throw ComputeError("CZ qubits must differ");
            const std::size_t mask = (std::size_t{1} << g.q0) | (std::size_t{1} << g.q1);
            const std::size_t dim = state.amplitudes.size();
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & mask) == mask) state.amplitudes[i] = -state.amplitudes[i];
            }
            break;
        }
    }
}

double fidelity_exact(const StateVector& a, const StateVector& b) {
    if (a.n_qubits != b.n_qubits) throw ComputeError("fidelity: width mismatch");
    cdouble inner{0.0, 0.0};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        inner += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    // Cauchy-Schwarz bounds the true value by 1; trim float excess
    return std::min(std::norm(inner), 1.0);
}

}  // namespace qks
