#pragma once

#include <Eigen/Dense>

#include "qks/noise.hpp"
#include "qks/statevector.hpp"

namespace qks {

using DensityMatrix = Eigen::MatrixXcd;

DensityMatrix density_from_state(const StateVector& sv);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 via Hermitian
// eigendecompositions. Inputs must be Hermitian, PSD and unit-trace within
// 1e-8. Intended for small systems (<= 6 qubits).
double fidelity_mixed(const DensityMatrix& rho, const DensityMatrix& sigma);

// Exact superoperator evolution of the same op list the trajectory sampler
// executes; reference implementation for validating run_noisy_trajectories.
DensityMatrix evolve_density(int n_qubits, const std::vector<NoiseOp>& ops);

double all_zeros_probability(const DensityMatrix& rho);

}  // namespace qks
