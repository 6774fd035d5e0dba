#pragma once

#include <string>
#include <vector>

#include "qks/matrix.hpp"

namespace qks {

enum class KnnMetric { Euclidean, Manhattan, Minkowski };
enum class KnnWeights { Uniform, Distance };

std::string knn_metric_name(KnnMetric m);
KnnMetric knn_metric_from_name(const std::string& s);

struct KnnModel {
    FeatureMatrix train;  // carries labels
    int k = 5;
    KnnMetric metric = KnnMetric::Euclidean;
    double minkowski_p = 3.0;  // Minkowski only
    KnnWeights weights = KnnWeights::Uniform;
};

// Majority class among the k nearest neighbors; distance weighting scales
// each vote by 1/(d + 1e-12). Distance ties resolve to the lower training
// index, class-score ties to +1.
std::vector<int> knn_predict(const KnnModel& model, const FeatureMatrix& queries);

}  // namespace qks
