#include "qks/density.hpp"

#include <cmath>

#include "qks/common.hpp"

namespace qks {

namespace {

constexpr int kMaxDensityQubits = 6;

void check_state(const DensityMatrix& rho, const char* name) {
    const double tol = 1e-8;
    if (rho.rows() != rho.cols()) throw ComputeError(std::string(name) + ": not square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw ComputeError(std::string(name) + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        throw ComputeError(std::string(name) + ": trace != 1");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw ComputeError(std::string(name) + ": not positive semi-definite");
}

DensityMatrix matrix_sqrt_psd(const DensityMatrix& m) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

// Full 2^n x 2^n unitary for a gate; dense construction is fine at this size.
Eigen::MatrixXcd gate_unitary(int n_qubits, const Gate& g) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    StateVector basis;
    for (Eigen::Index col = 0; col < dim; ++col) {
        basis.n_qubits = n_qubits;
        basis.amplitudes.assign(static_cast<std::size_t>(dim), cdouble{0.0, 0.0});
        basis.amplitudes[static_cast<std::size_t>(col)] = cdouble{1.0, 0.0};
        apply_gate(basis, g);
        for (Eigen::Index row = 0; row < dim; ++row)
            u(row, col) = basis.amplitudes[static_cast<std::size_t>(row)];
    }
    return u;
}

Eigen::MatrixXcd embed_1q(int n_qubits, int q, const Eigen::Matrix2cd& op) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::Index base = i & ~bit;
        int b = (i & bit) ? 1 : 0;
        for (int b2 = 0; b2 < 2; ++b2) {
            cdouble v = op(b, b2);
            if (v != cdouble{0.0, 0.0}) out(i, base | (b2 ? bit : 0)) = v;
        }
    }
    return out;
}

}  // namespace

DensityMatrix density_from_state(const StateVector& sv) {
    const Eigen::Index dim = static_cast<Eigen::Index>(sv.amplitudes.size());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = sv.amplitudes[static_cast<std::size_t>(i)];
    return v * v.adjoint();
}

double fidelity_mixed(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.rows() != sigma.rows()) throw ComputeError("fidelity_mixed: width mismatch");
    check_state(rho, "rho");
    check_state(sigma, "sigma");
    DensityMatrix sqrt_rho = matrix_sqrt_psd(rho);
    DensityMatrix inner = sqrt_rho * sigma * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(inner, Eigen::EigenvaluesOnly);
    // rank-deficient products carry O(eps) spurious eigenvalues whose square
    // roots would dominate the error; drop everything below a relative cutoff
    double max_ev = std::max(es.eigenvalues().maxCoeff(), 0.0);
    double cutoff = 1e-12 * std::max(max_ev, 1e-300);
    double trace_sqrt = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double ev = es.eigenvalues()(i);
        if (ev > cutoff) trace_sqrt += std::sqrt(ev);
    }
    double f = trace_sqrt * trace_sqrt;
    return std::min(f, 1.0);
}

DensityMatrix evolve_density(int n_qubits, const std::vector<NoiseOp>& ops) {
    if (n_qubits > kMaxDensityQubits)
        throw ComputeError("density evolution capped at " +
                           std::to_string(kMaxDensityQubits) + " qubits");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    for (const auto& op : ops) {
        switch (op.type) {
            case NoiseOp::Type::Unitary: {
                Eigen::MatrixXcd u = gate_unitary(n_qubits, op.gate);
                rho = u * rho * u.adjoint();
                break;
            }
            case NoiseOp::Type::AmpDamp: {
                // with probability `param`, measure the qubit and reset to |0>
                Eigen::Matrix2cd ka, kb;
                ka << 1.0, 0.0, 0.0, 0.0;  // |0><0|
                kb << 0.0, 1.0, 0.0, 0.0;  // |0><1|
                Eigen::MatrixXcd kaf = embed_1q(n_qubits, op.qubit, ka);
                Eigen::MatrixXcd kbf = embed_1q(n_qubits, op.qubit, kb);
                rho = (1.0 - op.param) * rho +
                      op.param * (kaf * rho * kaf.adjoint() + kbf * rho * kbf.adjoint());
                break;
            }
            case NoiseOp::Type::Dephase: {
                Eigen::Matrix2cd z;
                z << 1.0, 0.0, 0.0, -1.0;
                Eigen::MatrixXcd zf = embed_1q(n_qubits, op.qubit, z);
                rho = (1.0 - op.param) * rho + op.param * (zf * rho * zf.adjoint());
                break;
            }
        }
    }
    return rho;
}

double all_zeros_probability(const DensityMatrix& rho) {
    return rho(0, 0).real();
}

}  // namespace qks
