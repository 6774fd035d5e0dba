#pragma once

#include <cstddef>
#include <vector>

#include "qks/matrix.hpp"

namespace qks {

// Per-column standardizer. Population variance (divide by N); constant
// columns get std = 0 and map to all-zero output.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> std;  // 0 for constant columns

    FeatureMatrix apply(const FeatureMatrix& m) const;
};

Scaler fit_scaler(const FeatureMatrix& m);

// standardize = fit + apply; requires N >= 2
std::pair<FeatureMatrix, Scaler> standardize(const FeatureMatrix& m);

struct PcaModel {
    std::vector<double> mean;                // length D
    std::size_t n_components = 0;            // K
    std::size_t n_features = 0;              // D
    std::vector<double> components;          // K x D row-major, rows orthonormal
    std::vector<double> explained_variance;  // length K, nonincreasing

    FeatureMatrix project(const FeatureMatrix& m) const;
};

// Top-k principal directions of the centered data (right singular vectors).
// explained_variance uses the population convention (sigma^2 / N).
// Requires 1 <= k <= min(N-1, D).
PcaModel fit_pca(const FeatureMatrix& m, std::size_t k);

// The full preprocessing pipeline: standardize, project onto k principal
// components, standardize again.
struct PipelineModel {
    Scaler scaler_raw;
    PcaModel pca;
    Scaler scaler_projected;

    FeatureMatrix apply(const FeatureMatrix& m) const;
};

std::pair<FeatureMatrix, PipelineModel> preprocess(const FeatureMatrix& m, std::size_t k);

}  // namespace qks
