#include "qks/preprocess.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qks/common.hpp"

namespace qks {

namespace {

Eigen::MatrixXd to_eigen(const FeatureMatrix& m) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(
        m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
}

}  // namespace

FeatureMatrix Scaler::apply(const FeatureMatrix& m) const {
    if (m.cols != mean.size()) throw ComputeError("scaler width mismatch");
    FeatureMatrix out = m;
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            double s = std[c];
            out.at(r, c) = s > 0.0 ? (m.at(r, c) - mean[c]) / s : 0.0;
        }
    }
    return out;
}

Scaler fit_scaler(const FeatureMatrix& m) {
    Scaler sc;
    sc.mean.assign(m.cols, 0.0);
    sc.std.assign(m.cols, 0.0);
    if (m.rows == 0) return sc;
    for (std::size_t c = 0; c < m.cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) s += m.at(r, c);
        sc.mean[c] = s / static_cast<double>(m.rows);
    }
    for (std::size_t c = 0; c < m.cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            double d = m.at(r, c) - sc.mean[c];
            s += d * d;
        }
        sc.std[c] = std::sqrt(s / static_cast<double>(m.rows));
    }
    return sc;
}

std::pair<FeatureMatrix, Scaler> standardize(const FeatureMatrix& m) {
    if (m.rows < 2) throw ComputeError("standardize requires at least 2 rows");
    Scaler sc = fit_scaler(m);
    return {sc.apply(m), sc};
}

FeatureMatrix PcaModel::project(const FeatureMatrix& m) const {
    if (m.cols != n_features) throw ComputeError("pca width mismatch");
    FeatureMatrix out = FeatureMatrix::zeros(m.rows, n_components);
    out.labels = m.labels;
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t k = 0; k < n_components; ++k) {
            double s = 0.0;
            const double* comp = components.data() + k * n_features;
            for (std::size_t c = 0; c < n_features; ++c)
                s += (m.at(r, c) - mean[c]) * comp[c];
            out.at(r, k) = s;
        }
    }
    for (std::size_t k = 0; k < n_components; ++k)
        out.column_names.push_back("pc" + std::to_string(k + 1));
    return out;
}

PcaModel fit_pca(const FeatureMatrix& m, std::size_t k) {
    if (m.rows < 2) throw ComputeError("fit_pca requires at least 2 rows");
    if (k < 1 || k > std::min(m.rows - 1, m.cols)) {
        throw ComputeError("fit_pca: k=" + std::to_string(k) + " out of range [1, " +
                           std::to_string(std::min(m.rows - 1, m.cols)) + "]");
    }
    Eigen::MatrixXd x = to_eigen(m);
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    Eigen::MatrixXd v = svd.matrixV();          // D x r
    Eigen::VectorXd sv = svd.singularValues();  // r

    PcaModel model;
    model.n_components = k;
    model.n_features = m.cols;
    model.mean.assign(mean.data(), mean.data() + m.cols);
    model.components.resize(k * m.cols);
    model.explained_variance.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        Eigen::VectorXd comp = v.col(static_cast<Eigen::Index>(i));
        // deterministic sign: largest-magnitude entry positive
        Eigen::Index imax;
        comp.cwiseAbs().maxCoeff(&imax);
        if (comp(imax) < 0) comp = -comp;
        for (std::size_t c = 0; c < m.cols; ++c)
            model.components[i * m.cols + c] = comp(static_cast<Eigen::Index>(c));
        double s = sv(static_cast<Eigen::Index>(i));
        model.explained_variance[i] = s * s / static_cast<double>(m.rows);
    }
    return model;
}

FeatureMatrix PipelineModel::apply(const FeatureMatrix& m) const {
    FeatureMatrix z = scaler_raw.apply(m);
    z.labels = m.labels;
    FeatureMatrix p = pca.project(z);
    FeatureMatrix out = scaler_projected.apply(p);
    out.labels = m.labels;
    out.column_names = p.column_names;
    return out;
}

std::pair<FeatureMatrix, PipelineModel> preprocess(const FeatureMatrix& m, std::size_t k) {
    PipelineModel pipe;
    auto [z, sc1] = standardize(m);
    pipe.scaler_raw = sc1;
    pipe.pca = fit_pca(z, k);
    FeatureMatrix projected = pipe.pca.project(z);
    auto [out, sc2] = standardize(projected);
    pipe.scaler_projected = sc2;
    out.labels = m.labels;
    out.column_names = projected.column_names;
    return {out, pipe};
}

}  // namespace qks
