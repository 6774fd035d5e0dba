#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qks/ansatz.hpp"

namespace qks {

// Thermal-relaxation parameters in the style of device calibration sheets.
// After every gate, each touched qubit undergoes an amplitude-damping event
// (relaxation toward |0>) with probability 1-exp(-t_gate/T1) and a pure
// dephasing event with probability 1-exp(-t_gate/Tphi), where
// 1/Tphi = 1/T2 - 1/(2*T1). Event probabilities are fixed per gate kind, the
// way fake-backend error insertion works.
struct NoiseModel {
    double t1_us = 50.0;
    double t2_us = 70.0;
    double gate_time_1q_ns = 50.0;
    double gate_time_2q_ns = 300.0;
    int shots = 256;
    std::uint64_t rng_seed = 0;

    void validate() const;
    double gamma_for(GateKind kind) const;   // amplitude-damping parameter
    double z_prob_for(GateKind kind) const;  // net Z-flip probability (lambda/2)
};

// Flat execution list: unitary gates interleaved with per-qubit noise
// channels.
struct NoiseOp {
    enum class Type { Unitary, AmpDamp, Dephase };
    Type type;
    Gate gate{};        // Unitary only
    int qubit = -1;     // channel ops
    double param = 0.0; // AmpDamp: gamma; Dephase: Z probability
};

std::vector<NoiseOp> expand_noisy_ops(const std::vector<Gate>& gates, const NoiseModel& nm);

// Quantum-trajectory execution: one stochastic pure-state trajectory per
// shot, measuring the all-zeros projector at the end. Returns the fraction
// of all-zeros outcomes. Deterministic given seed.
//
// Because event probabilities are state-independent, the sampler draws each
// shot's event sites directly from the precomputed survival chain, branches
// off cached clean-path checkpoints, and resolves event-free tails with one
// inner product against backward-evolved projector states. Only shots with
// two or more events replay gate segments.
double run_noisy_trajectories(int n_qubits, const std::vector<NoiseOp>& ops, int shots,
                              std::uint64_t seed);

// Inversion-test fidelity estimate under the noise model.
double fidelity_noisy(const CircuitSpec& spec, std::span<const double> x,
                      std::span<const double> y, const NoiseModel& noise);

}  // namespace qks
