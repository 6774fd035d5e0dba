#include "qks/svm.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>

#include "qks/common.hpp"

namespace qks {

namespace {

constexpr double kTau = 1e-12;           // floor for curvature
constexpr double kSupportEps = 1e-8;     // alpha threshold for support vectors
constexpr std::size_t kMaxIter = 10'000'000;

void check_inputs(const GramMatrix& k, const std::vector<int>& y) {
    if (!k.square()) throw ComputeError("svm_fit: Gram must be square");
    if (k.rows != y.size()) throw ComputeError("svm_fit: label count mismatch");
    for (std::size_t i = 0; i < k.rows; ++i)
        for (std::size_t j = i + 1; j < k.cols; ++j)
            if (std::abs(k.at(i, j) - k.at(j, i)) > 1e-9)
                throw ComputeError("svm_fit: Gram is not symmetric");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == +1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw ComputeError("svm_fit: labels must be +/-1");
    }
    if (!has_pos || !has_neg) throw ComputeError("svm_fit: both classes must be present");
}

}  // namespace

SvmModel svm_fit(const GramMatrix& k, const std::vector<int>& y, double C, double tol) {
    check_inputs(k, y);
    if (!(C > 0.0)) throw ConfigError("svm C must be positive");
    if (!(tol > 0.0)) throw ConfigError("svm tol must be positive");
    const std::size_t n = k.rows;

    std::vector<double> alpha(n, 0.0);
    // G_i = d(dual)/d(alpha_i) = y_i * sum_j alpha_j y_j K_ij - 1; all alphas
    // start at zero.
    std::vector<double> grad(n, -1.0);

    auto in_up = [&](std::size_t i) {
        return (y[i] == +1 && alpha[i] < C) || (y[i] == -1 && alpha[i] > 0);
    };
    auto in_low = [&](std::size_t i) {
        return (y[i] == +1 && alpha[i] > 0) || (y[i] == -1 && alpha[i] < C);
    };

    std::size_t iter = 0;
    while (true) {
        if (++iter > kMaxIter) throw ComputeError("svm_fit: SMO failed to converge");
        // maximal violating pair
        double m_val = -std::numeric_limits<double>::infinity();
        double big_m_val = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            if (in_up(t) && v > m_val) {
                m_val = v;
                i = t;
            }
            if (in_low(t) && v < big_m_val) {
                big_m_val = v;
                j = t;
            }
        }
        if (i == n || j == n || m_val - big_m_val <= tol) break;

        const double kii = k.at(i, i), kjj = k.at(j, j), kij = k.at(i, j);
        const double old_ai = alpha[i], old_aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = kii + kjj - 2.0 * kij;
            if (quad <= 0) quad = kTau;
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            double quad = kii + kjj - 2.0 * kij;
            if (quad <= 0) quad = kTau;
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
            }
        }
        const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * k.at(i, t) * dai + y[j] * k.at(j, t) * daj);
    }

    SvmModel model;
    model.alphas = alpha;
    model.train_labels = y;
    model.C = C;
    model.tol = tol;
    model.params = k.params;

    // decision value at train i without bias: d_i = y_i * (G_i + 1)
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        double yd = y[t] - y[t] * (grad[t] + 1.0);  // y_t - d_t
        if (alpha[t] > kSupportEps && alpha[t] < C - kSupportEps) {
            free_sum += yd;
            ++free_count;
        }
        if (in_up(t)) lower = std::max(lower, yd);
        if (in_low(t)) upper = std::min(upper, yd);
    }
    model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                : 0.5 * (lower + upper);

    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > kSupportEps) model.support_idx.push_back(t);
    return model;
}

std::vector<double> svm_decision_values(const SvmModel& model, const GramMatrix& test_gram) {
    const std::size_t n_train = model.alphas.size();
    if (test_gram.cols != n_train)
        throw ComputeError("svm_predict: Gram columns do not match training rows");
    std::vector<double> out(test_gram.rows);
    for (std::size_t r = 0; r < test_gram.rows; ++r) {
        double s = model.bias;
        for (std::size_t i : model.support_idx)
            s += model.alphas[i] * model.train_labels[i] * test_gram.at(r, i);
        out[r] = s;
    }
    return out;
}

std::vector<int> svm_predict(const SvmModel& model, const GramMatrix& test_gram) {
    auto values = svm_decision_values(model, test_gram);
    std::vector<int> labels(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) labels[i] = values[i] < 0.0 ? -1 : +1;
    return labels;
}

double SvmModel::dual_objective(const GramMatrix& train_gram) const {
    double obj = 0.0;
    const std::size_t n = alphas.size();
    for (std::size_t i = 0; i < n; ++i) obj += alphas[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (alphas[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alphas[j] == 0.0) continue;
            obj -= 0.5 * alphas[i] * alphas[j] * train_labels[i] * train_labels[j] *
                   train_gram.at(i, j);
        }
    }
    return obj;
}

std::string SvmModel::to_json() const {
    nlohmann::json j;
    j["alphas"] = alphas;
    j["bias"] = bias;
    j["support_idx"] = support_idx;
    j["train_labels"] = train_labels;
    j["C"] = C;
    j["tol"] = tol;
    j["kernel"] = kernel_name(params.kind);
    return j.dump(2);
}

}  // namespace qks
