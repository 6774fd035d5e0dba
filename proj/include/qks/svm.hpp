#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qks/kernels.hpp"

namespace qks {

// Soft-margin SVM trained in the dual over a precomputed kernel.
// Decision function: f(x) = sum_i alpha_i y_i K(x_i, x) + bias; ties at
// exactly 0 predict +1 (P).
struct SvmModel {
    std::vector<double> alphas;      // length N, 0 <= alpha_i <= C
    double bias = 0.0;
    std::vector<std::size_t> support_idx;  // {i : alpha_i > 1e-8}
    std::vector<int> train_labels;   // +/-1
    double C = 1.0;
    double tol = 1e-3;
    KernelParams params;

    std::string to_json() const;

    // dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
    double dual_objective(const GramMatrix& train_gram) const;
};

// SMO with maximal-violating-pair selection; converges when the pairwise
// KKT gap drops to tol. Gram must be square and symmetric; both classes
// must be present.
SvmModel svm_fit(const GramMatrix& train_gram, const std::vector<int>& labels, double C,
                 double tol);

std::vector<double> svm_decision_values(const SvmModel& model, const GramMatrix& test_gram);
std::vector<int> svm_predict(const SvmModel& model, const GramMatrix& test_gram);

}  // namespace qks
