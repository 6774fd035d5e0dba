#include "qks/knn.hpp"

#include <algorithm>
#include <cmath>

#include "qks/common.hpp"

namespace qks {

std::string knn_metric_name(KnnMetric m) {
    switch (m) {
        case KnnMetric::Euclidean: return "euclidean";
        case KnnMetric::Manhattan: return "manhattan";
        case KnnMetric::Minkowski: return "minkowski";
    }
    return "?";
}

KnnMetric knn_metric_from_name(const std::string& s) {
    if (s == "euclidean") return KnnMetric::Euclidean;
    if (s == "manhattan") return KnnMetric::Manhattan;
    if (s == "minkowski") return KnnMetric::Minkowski;
    throw ConfigError("unknown knn metric '" + s + "'");
}

namespace {

double distance(std::span<const double> a, std::span<const double> b, KnnMetric metric,
                double p) {
    switch (metric) {
        case KnnMetric::Euclidean:
            return std::sqrt(squared_distance(a, b));
        case KnnMetric::Manhattan: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
            return s;
        }
        case KnnMetric::Minkowski: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
            return std::pow(s, 1.0 / p);
        }
    }
    return 0.0;
}

}  // namespace

std::vector<int> knn_predict(const KnnModel& model, const FeatureMatrix& queries) {
    const std::size_t n = model.train.rows;
    if (model.k < 1 || static_cast<std::size_t>(model.k) > n)
        throw ConfigError("knn: k out of range");
    if (queries.cols != model.train.cols)
        throw ComputeError("knn: query width mismatch");
    if (model.train.labels.size() != n)
        throw ComputeError("knn: training data has no labels");

    std::vector<int> out(queries.rows);
    std::vector<std::pair<double, std::size_t>> dists(n);
    for (std::size_t q = 0; q < queries.rows; ++q) {
        auto query = queries.row(q);
        for (std::size_t i = 0; i < n; ++i)
            dists[i] = {distance(query, model.train.row(i), model.metric, model.minkowski_p), i};
        std::sort(dists.begin(), dists.end());  // pair ordering breaks distance ties by index
        double score_pos = 0.0, score_neg = 0.0;
        for (int t = 0; t < model.k; ++t) {
            double w = model.weights == KnnWeights::Uniform
                           ? 1.0
                           : 1.0 / (dists[t].first + 1e-12);
            if (model.train.labels[dists[t].second] == +1) score_pos += w;
            else score_neg += w;
        }
        out[q] = score_pos >= score_neg ? +1 : -1;
    }
    return out;
}

}  // namespace qks
