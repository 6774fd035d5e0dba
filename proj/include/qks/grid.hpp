#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qks/kernels.hpp"
#include "qks/knn.hpp"
#include "qks/tree.hpp"

namespace qks {

enum class Method { SVC, KNN, DT, QSVC };

std::string method_name(Method m);
Method method_from_name(const std::string& s);

struct SvcPoint {
    KernelKind kernel = KernelKind::RBF;
    double C = 1.0;
    bool gamma_scale = true;
    double gamma = 0.0;
    double tol = 1e-3;
    double coef0 = 0.0;
    int degree = 3;
};

struct KnnPoint {
    int k = 5;
    KnnMetric metric = KnnMetric::Euclidean;
    double minkowski_p = 3.0;
    KnnWeights weights = KnnWeights::Uniform;
};

struct DtPoint {
    TreeCriterion criterion = TreeCriterion::Gini;
    TreeSplitter splitter = TreeSplitter::Best;
    int max_depth = -1;  // -1 = none
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

struct QsvcPoint {
    double bandwidth = 0.4;  // C = 1.0, tol = 1e-3, precomputed kernel
};

using ParamPoint = std::variant<SvcPoint, KnnPoint, DtPoint, QsvcPoint>;

nlohmann::json point_to_json(const ParamPoint& p);
ParamPoint point_from_json(const nlohmann::json& j);
std::string point_key(const ParamPoint& p);  // canonical short form

struct GridSpec {
    Method method = Method::SVC;
    std::vector<ParamPoint> points;  // expanded grid, declared-axis order
    nlohmann::json axes;             // recorded for report configs

    static GridSpec single(const ParamPoint& p);
};

// Default grids. Axis order is the declaration order below; expansion nests
// later axes innermost, so ties in validation score resolve toward earlier
// axis values.
GridSpec default_svc_grid();
GridSpec default_knn_grid();
GridSpec default_dt_grid();
GridSpec default_qsvc_grid();
GridSpec default_grid(Method m);

}  // namespace qks
