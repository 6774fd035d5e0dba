#include "qks/grid.hpp"

#include <sstream>

#include "qks/common.hpp"

namespace qks {

std::string method_name(Method m) {
    switch (m) {
        case Method::SVC: return "svc";
        case Method::KNN: return "knn";
        case Method::DT: return "dt";
        case Method::QSVC: return "qsvc";
    }
    return "?";
}

Method method_from_name(const std::string& s) {
    if (s == "svc") return Method::SVC;
    if (s == "knn") return Method::KNN;
    if (s == "dt") return Method::DT;
    if (s == "qsvc") return Method::QSVC;
    throw ConfigError("unknown method '" + s + "'");
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

nlohmann::json point_to_json(const ParamPoint& p) {
    nlohmann::json j;
    if (const auto* s = std::get_if<SvcPoint>(&p)) {
        j["method"] = "svc";
        j["kernel"] = kernel_name(s->kernel);
        j["C"] = s->C;
        if (s->gamma_scale) j["gamma"] = "scale";
        else j["gamma"] = s->gamma;
        j["tol"] = s->tol;
        j["coef0"] = s->coef0;
        j["degree"] = s->degree;
    } else if (const auto* k = std::get_if<KnnPoint>(&p)) {
        j["method"] = "knn";
        j["k"] = k->k;
        j["metric"] = knn_metric_name(k->metric);
        if (k->metric == KnnMetric::Minkowski) j["p"] = k->minkowski_p;
        j["weights"] = k->weights == KnnWeights::Uniform ? "uniform" : "distance";
    } else if (const auto* d = std::get_if<DtPoint>(&p)) {
        j["method"] = "dt";
        j["criterion"] = criterion_name(d->criterion);
        j["splitter"] = d->splitter == TreeSplitter::Best ? "best" : "random";
        if (d->max_depth < 0) j["max_depth"] = nullptr;
        else j["max_depth"] = d->max_depth;
        j["min_samples_split"] = d->min_samples_split;
        j["min_samples_leaf"] = d->min_samples_leaf;
    } else if (const auto* q = std::get_if<QsvcPoint>(&p)) {
        j["method"] = "qsvc";
        j["bandwidth"] = q->bandwidth;
    }
    return j;
}

ParamPoint point_from_json(const nlohmann::json& j) {
    std::string m = j.at("method").get<std::string>();
    if (m == "svc") {
        SvcPoint s;
        s.kernel = kernel_from_name(j.at("kernel").get<std::string>());
        s.C = j.at("C").get<double>();
        if (j.at("gamma").is_string()) {
            s.gamma_scale = true;
        } else {
            s.gamma_scale = false;
            s.gamma = j.at("gamma").get<double>();
        }
        s.tol = j.at("tol").get<double>();
        if (j.contains("coef0")) s.coef0 = j.at("coef0").get<double>();
        if (j.contains("degree")) s.degree = j.at("degree").get<int>();
        return s;
    }
    if (m == "knn") {
        KnnPoint k;
        k.k = j.at("k").get<int>();
        k.metric = knn_metric_from_name(j.at("metric").get<std::string>());
        if (j.contains("p")) k.minkowski_p = j.at("p").get<double>();
        k.weights = j.at("weights").get<std::string>() == "uniform" ? KnnWeights::Uniform
                                                                    : KnnWeights::Distance;
        return k;
    }
    if (m == "dt") {
        DtPoint d;
        d.criterion = criterion_from_name(j.at("criterion").get<std::string>());
        d.splitter = j.at("splitter").get<std::string>() == "best" ? TreeSplitter::Best
                                                                   : TreeSplitter::Random;
        d.max_depth = j.at("max_depth").is_null() ? -1 : j.at("max_depth").get<int>();
        d.min_samples_split = j.at("min_samples_split").get<int>();
        d.min_samples_leaf = j.at("min_samples_leaf").get<int>();
        return d;
    }
    if (m == "qsvc") {
        QsvcPoint q;
        q.bandwidth = j.at("bandwidth").get<double>();
        return q;
    }
    throw ConfigError("unknown method in params json: " + m);
}

std::string point_key(const ParamPoint& p) {
    if (const auto* s = std::get_if<SvcPoint>(&p)) {
        return "svc:" + kernel_name(s->kernel) + ",C=" + fmt(s->C) + ",gamma=" +
               (s->gamma_scale ? std::string("scale") : fmt(s->gamma)) + ",tol=" + fmt(s->tol);
    }
    if (const auto* k = std::get_if<KnnPoint>(&p)) {
        return "knn:k=" + std::to_string(k->k) + "," + knn_metric_name(k->metric) + "," +
               (k->weights == KnnWeights::Uniform ? "uniform" : "distance");
    }
    if (const auto* d = std::get_if<DtPoint>(&p)) {
        return "dt:" + criterion_name(d->criterion) + "," +
               (d->splitter == TreeSplitter::Best ? "best" : "random") + ",depth=" +
               (d->max_depth < 0 ? std::string("none") : std::to_string(d->max_depth)) +
               ",mss=" + std::to_string(d->min_samples_split) +
               ",msl=" + std::to_string(d->min_samples_leaf);
    }
    const auto& q = std::get<QsvcPoint>(p);
    return "qsvc:b=" + fmt(q.bandwidth);
}

GridSpec GridSpec::single(const ParamPoint& p) {
    GridSpec g;
    g.method = std::holds_alternative<SvcPoint>(p)   ? Method::SVC
               : std::holds_alternative<KnnPoint>(p) ? Method::KNN
               : std::holds_alternative<DtPoint>(p)  ? Method::DT
                                                     : Method::QSVC;
    g.points.push_back(p);
    g.axes = nlohmann::json::object();
    g.axes["single"] = point_to_json(p);
    return g;
}

GridSpec default_svc_grid() {
    const std::vector<std::string> kernels = {"rbf", "linear", "poly", "sigmoid"};
    const std::vector<double> cs = {0.1, 1.0, 10.0, 100.0};
    const std::vector<std::string> gammas = {"scale", "0.001", "0.01", "0.1"};
    const std::vector<double> tols = {1e-3, 1e-4};
    GridSpec g;
    g.method = Method::SVC;
    g.axes = {{"kernel", kernels}, {"C", cs}, {"gamma", gammas}, {"tol", tols}};
    for (const auto& kn : kernels)
        for (double c : cs)
            for (const auto& gm : gammas)
                for (double tol : tols) {
                    SvcPoint p;
                    p.kernel = kernel_from_name(kn);
                    p.C = c;
                    if (gm == "scale") {
                        p.gamma_scale = true;
                    } else {
                        p.gamma_scale = false;
                        p.gamma = std::stod(gm);
                    }
                    p.tol = tol;
                    g.points.push_back(p);
                }
    return g;
}

GridSpec default_knn_grid() {
    const std::vector<int> ks = {3, 5, 7, 9, 11};
    const std::vector<KnnMetric> metrics = {KnnMetric::Euclidean, KnnMetric::Manhattan};
    const std::vector<KnnWeights> weights = {KnnWeights::Uniform, KnnWeights::Distance};
    GridSpec g;
    g.method = Method::KNN;
    g.axes = {{"k", ks},
              {"metric", {"euclidean", "manhattan"}},
              {"weights", {"uniform", "distance"}}};
    for (int k : ks)
        for (auto m : metrics)
            for (auto w : weights) g.points.push_back(KnnPoint{k, m, 3.0, w});
    return g;
}

GridSpec default_dt_grid() {
    const std::vector<TreeCriterion> criteria = {TreeCriterion::Gini, TreeCriterion::Entropy};
    const std::vector<TreeSplitter> splitters = {TreeSplitter::Best, TreeSplitter::Random};
    const std::vector<int> depths = {3, 5, 10, -1};
    const std::vector<int> mss = {2, 5, 10};
    const std::vector<int> msl = {1, 2, 5};
    GridSpec g;
    g.method = Method::DT;
    g.axes = {{"criterion", {"gini", "entropy"}},
              {"splitter", {"best", "random"}},
              {"max_depth", {3, 5, 10, nullptr}},
              {"min_samples_split", mss},
              {"min_samples_leaf", msl}};
    for (auto c : criteria)
        for (auto s : splitters)
            for (int d : depths)
                for (int a : mss)
                    for (int b : msl) g.points.push_back(DtPoint{c, s, d, a, b});
    return g;
}

GridSpec default_qsvc_grid() {
    const std::vector<double> bandwidths = {0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
    GridSpec g;
    g.method = Method::QSVC;
    g.axes = {{"bandwidth", bandwidths}};
    for (double b : bandwidths) g.points.push_back(QsvcPoint{b});
    return g;
}

GridSpec default_grid(Method m) {
    switch (m) {
        case Method::SVC: return default_svc_grid();
        case Method::KNN: return default_knn_grid();
        case Method::DT: return default_dt_grid();
        case Method::QSVC: return default_qsvc_grid();
    }
    throw ConfigError("unknown method");
}

}  // namespace qks
