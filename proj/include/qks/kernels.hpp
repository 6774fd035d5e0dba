#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qks/ansatz.hpp"
#include "qks/matrix.hpp"
#include "qks/noise.hpp"

namespace qks {

enum class KernelKind { RBF, Linear, Poly, Sigmoid, Quantum };

std::string kernel_name(KernelKind k);
KernelKind kernel_from_name(const std::string& s);

struct KernelParams {
    KernelKind kind = KernelKind::RBF;
    bool gamma_scale = true;  // gamma = "scale": 1/(D * total variance)
    double gamma = 0.0;       // resolved value when !gamma_scale
    double coef0 = 0.0;       // r in poly/sigmoid
    int degree = 3;           // poly
    std::optional<CircuitSpec> circuit;  // required for Quantum

    void check() const;
};

// Resolves gamma="scale" against a concrete dataset:
// gamma = 1 / (n_features * population variance of all entries).
KernelParams resolve_gamma(const KernelParams& p, const FeatureMatrix& data);

// How quantum kernel entries are computed.
struct ExecMode {
    enum class Kind { Exact, Shots, Noisy };
    Kind kind = Kind::Exact;
    int shots = 256;
    std::uint64_t seed = 0;  // per-pair streams derived from (seed, i, j)
    NoiseModel noise{};      // Noisy only; noise.shots/rng_seed come from here

    static ExecMode exact() { return {}; }
    static ExecMode with_shots(int n, std::uint64_t seed);
    static ExecMode noisy(const NoiseModel& nm, std::uint64_t seed);
    std::string describe() const;
};

// Single kernel entry, exact execution. Requires resolved gamma.
double kernel_value(std::span<const double> x, std::span<const double> y,
                    const KernelParams& p);

// Single kernel entry under an execution mode (quantum kinds only differ).
double kernel_value(std::span<const double> x, std::span<const double> y,
                    const KernelParams& p, const ExecMode& mode, std::uint64_t pair_seed);

struct GramMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> values;
    std::vector<std::size_t> row_ids, col_ids;
    KernelParams params;
    std::string mode_desc = "exact";

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    bool square() const { return rows == cols; }

    // Submatrix lookup by original ids (for train/test slicing).
    GramMatrix slice(const std::vector<std::size_t>& r_ids,
                     const std::vector<std::size_t>& c_ids) const;
};

// Pairwise kernel matrix. When `rows` and `cols` are the same object the
// result is computed on the upper triangle and mirrored; in shots mode the
// diagonal is pinned to 1 without sampling. Quantum exact mode encodes every
// row once and takes pairwise overlaps.
GramMatrix gram(const FeatureMatrix& rows, const FeatureMatrix& cols, const KernelParams& p,
                const ExecMode& mode = ExecMode::exact(), int jobs = 1);

// Eigenvalues of a square symmetric Gram, sorted nonincreasing.
std::vector<double> spectrum(const GramMatrix& g);

inline bool spectrum_psd(const std::vector<double>& eigenvalues, double tol = 1e-8) {
    return eigenvalues.empty() || eigenvalues.back() >= -tol;
}

// CSV matrix + JSON sidecar (kernel params, mode) for replayable artifacts.
void save_gram(const GramMatrix& g, const std::string& csv_path);
GramMatrix load_gram(const std::string& csv_path);

}  // namespace qks
