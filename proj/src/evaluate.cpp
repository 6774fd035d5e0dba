#include "qks/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "qks/common.hpp"
#include "qks/dataset.hpp"
#include "qks/rng.hpp"
#include "qks/svm.hpp"

namespace qks {

std::string content_digest(const std::string& payload) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw ComputeError("accuracy: length mismatch");
    if (pred.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

std::vector<int> labels_at(const FeatureMatrix& data, const std::vector<std::size_t>& idx) {
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = data.labels[idx[i]];
    return out;
}

// Fits/predicts a single hyperparameter point over row subsets of one fixed
// matrix, caching full kernel Grams across calls so grid points and splits
// share them.
class MethodRunner {
  public:
    MethodRunner(const FeatureMatrix& data, const CvConfig& cfg) : data_(data), cfg_(cfg) {}

    std::vector<int> fit_predict(const ParamPoint& point, const std::vector<std::size_t>& train_idx,
                                 const std::vector<std::size_t>& eval_idx,
                                 std::uint64_t model_seed) {
        if (const auto* s = std::get_if<SvcPoint>(&point)) {
            KernelParams kp;
            kp.kind = s->kernel;
            kp.gamma_scale = s->gamma_scale;
            kp.gamma = s->gamma;
            kp.coef0 = s->coef0;
            kp.degree = s->degree;
            kp = resolve_gamma(kp, data_);
            const GramMatrix& full = cached_gram(kp, ExecMode::exact());
            SvmModel model = svm_fit(full.slice(train_idx, train_idx), labels_at(data_, train_idx),
                                     s->C, s->tol);
            return svm_predict(model, full.slice(eval_idx, train_idx));
        }
        if (const auto* q = std::get_if<QsvcPoint>(&point)) {
            KernelParams kp;
            kp.kind = KernelKind::Quantum;
            kp.circuit = build_ansatz(cfg_.qsvc_qubits, static_cast<int>(data_.cols), q->bandwidth);
            const GramMatrix& full = cached_gram(kp, cfg_.mode);
            SvmModel model = svm_fit(full.slice(train_idx, train_idx), labels_at(data_, train_idx),
                                     1.0, 1e-3);
            return svm_predict(model, full.slice(eval_idx, train_idx));
        }
        if (const auto* k = std::get_if<KnnPoint>(&point)) {
            KnnModel model;
            model.train = data_.take_rows(train_idx);
            model.k = k->k;
            model.metric = k->metric;
            model.minkowski_p = k->minkowski_p;
            model.weights = k->weights;
            return knn_predict(model, data_.take_rows(eval_idx));
        }
        const auto& d = std::get<DtPoint>(point);
        TreeLimits limits{d.max_depth, d.min_samples_split, d.min_samples_leaf};
        TreeModel model = tree_fit(data_.take_rows(train_idx), d.criterion, d.splitter, limits,
                                   model_seed);
        return tree_predict(model, data_.take_rows(eval_idx));
    }

    const FeatureMatrix& data() const { return data_; }

  private:
    const GramMatrix& cached_gram(const KernelParams& kp, const ExecMode& mode) {
        std::ostringstream key;
        key << kernel_name(kp.kind) << '|' << kp.gamma << '|' << kp.coef0 << '|' << kp.degree;
        if (kp.circuit)
            key << "|q" << kp.circuit->n_qubits << "|b" << kp.circuit->bandwidth;
        key << '|' << mode.describe() << '|' << mode.seed;
        auto it = cache_.find(key.str());
        if (it == cache_.end())
            it = cache_.emplace(key.str(), gram(data_, data_, kp, mode, cfg_.jobs)).first;
        return it->second;
    }

    const FeatureMatrix& data_;
    CvConfig cfg_;
    std::map<std::string, GramMatrix> cache_;
};

nlohmann::json base_config(const CvConfig& cfg, const SplitPlan& plan) {
    nlohmann::json c;
    c["seed"] = cfg.seed;
    c["mode"] = cfg.mode.describe();
    c["mode_seed"] = cfg.mode.seed;
    c["qsvc_qubits"] = cfg.qsvc_qubits;
    c["pca_per_split"] = cfg.pca_per_split;
    c["pca_components"] = cfg.pca_components;
    c["n_splits"] = plan.n_splits;
    c["train_frac"] = plan.train_frac;
    c["val_frac"] = plan.val_frac;
    c["test_frac"] = plan.test_frac;
    c["split_seed"] = plan.seed;
    return c;
}

}  // namespace

void ExperimentReport::finalize() {
    double sum = 0.0;
    for (const auto& s : per_split) sum += s.test_accuracy;
    double mean = per_split.empty() ? 0.0 : sum / static_cast<double>(per_split.size());
    double var = 0.0;
    for (const auto& s : per_split) var += (s.test_accuracy - mean) * (s.test_accuracy - mean);
    if (!per_split.empty()) var /= static_cast<double>(per_split.size());
    mean_acc_pct = mean * 100.0;
    std_acc_pct = std::sqrt(var) * 100.0;
    config_digest = content_digest(config.dump());
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["config"] = config;
    j["config_digest"] = config_digest;
    j["mean_accuracy_pct"] = mean_acc_pct;
    j["std_accuracy_pct"] = std_acc_pct;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : per_split) {
        rows.push_back({{"split", s.split_index},
                        {"params", s.chosen_params},
                        {"test_accuracy", s.test_accuracy}});
    }
    j["per_split"] = rows;
    return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.config = j.at("config");
    r.config_digest = j.at("config_digest").get<std::string>();
    r.mean_acc_pct = j.at("mean_accuracy_pct").get<double>();
    r.std_acc_pct = j.at("std_accuracy_pct").get<double>();
    for (const auto& row : j.at("per_split")) {
        SplitResult s;
        s.split_index = row.at("split").get<std::size_t>();
        s.chosen_params = row.at("params");
        s.test_accuracy = row.at("test_accuracy").get<double>();
        r.per_split.push_back(s);
    }
    return r;
}

void ExperimentReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "split,params,test_accuracy\n";
    out.precision(17);
    for (const auto& s : per_split)
        out << s.split_index << ",\"" << point_key(point_from_json(s.chosen_params)) << "\","
            << s.test_accuracy << '\n';
}

ExperimentReport run_grid_cv(const FeatureMatrix& data, const GridSpec& grid,
                             const SplitPlan& plan, const CvConfig& cfg) {
    if (grid.points.empty()) throw ConfigError("empty hyperparameter grid");
    if (grid.points.size() > 1 && plan.val_frac <= 0.0)
        throw ConfigError("grid search needs a validation fraction > 0");
    if (plan.splits.empty()) throw ConfigError("split plan has no splits");

    // Leakage-mirroring default: one preprocessed matrix, one runner, Grams
    // shared across splits. Per-split mode refits preprocessing inside each
    // split on its train+val rows.
    ExperimentReport report;
    report.config = base_config(cfg, plan);
    report.config["method"] = method_name(grid.method);
    report.config["grid_axes"] = grid.axes;
    report.config["n_rows"] = data.rows;
    report.config["n_cols"] = data.cols;

    std::unique_ptr<MethodRunner> shared_runner;
    if (!cfg.pca_per_split) shared_runner = std::make_unique<MethodRunner>(data, cfg);

    for (std::size_t s = 0; s < plan.splits.size(); ++s) {
        const Split& split = plan.splits[s];
        std::uint64_t model_seed = derive_seed(cfg.seed, s, 1);

        std::unique_ptr<MethodRunner> split_runner;
        FeatureMatrix split_data;
        MethodRunner* runner = shared_runner.get();
        if (cfg.pca_per_split) {
            FeatureMatrix fit_rows = data.take_rows(split.train_val());
            std::size_t k = std::min(cfg.pca_components, std::min(fit_rows.rows - 1, fit_rows.cols));
            auto [fit_out, pipe] = preprocess(fit_rows, k);
            (void)fit_out;
            split_data = pipe.apply(data);
            split_data.labels = data.labels;
            split_runner = std::make_unique<MethodRunner>(split_data, cfg);
            runner = split_runner.get();
        }

        std::size_t best_point = 0;
        if (grid.points.size() > 1) {
            double best_val = -1.0;
            for (std::size_t p = 0; p < grid.points.size(); ++p) {
                auto pred = runner->fit_predict(grid.points[p], split.train, split.val, model_seed);
                double acc = accuracy(pred, labels_at(runner->data(), split.val));
                if (acc > best_val) {
                    best_val = acc;
                    best_point = p;
                }
            }
        }
        auto final_pred =
            runner->fit_predict(grid.points[best_point], split.train_val(), split.test, model_seed);
        SplitResult res;
        res.split_index = s;
        res.chosen_params = point_to_json(grid.points[best_point]);
        res.test_accuracy = accuracy(final_pred, labels_at(runner->data(), split.test));
        report.per_split.push_back(std::move(res));
    }
    report.finalize();
    return report;
}

std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes) {
    if (votes.empty()) throw ComputeError("majority_vote: no voters");
    const std::size_t n = votes.front().size();
    for (const auto& v : votes)
        if (v.size() != n) throw ComputeError("majority_vote: voter length mismatch");
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        int sum = 0;
        for (const auto& v : votes) sum += v[i];
        out[i] = sum < 0 ? -1 : +1;
    }
    return out;
}

ParamPoint modal_params(const ExperimentReport& report) {
    if (report.per_split.empty()) throw ComputeError("modal_params: empty report");
    std::vector<std::string> order;
    std::map<std::string, std::size_t> counts;
    std::map<std::string, nlohmann::json> first_json;
    for (const auto& s : report.per_split) {
        std::string key = point_key(point_from_json(s.chosen_params));
        if (!counts.count(key)) {
            order.push_back(key);
            first_json[key] = s.chosen_params;
        }
        counts[key]++;
    }
    std::string best = order.front();
    for (const auto& key : order)
        if (counts[key] > counts[best]) best = key;
    return point_from_json(first_json[best]);
}

const std::vector<int>& best5_tasks_classical() {
    static const std::vector<int> t = {21, 17, 16, 7, 23};
    return t;
}

const std::vector<int>& best5_tasks_quantum() {
    static const std::vector<int> t = {21, 17, 24, 14, 23};
    return t;
}

std::vector<int> all_task_ids() {
    std::vector<int> t(kTaskCount);
    for (int i = 0; i < kTaskCount; ++i) t[i] = i + 1;
    return t;
}

ExperimentReport fixed_point_cv(const FeatureMatrix& raw, const std::vector<int>& tasks,
                                const ParamPoint& point, const SplitPlan& plan,
                                const CvConfig& cfg) {
    FeatureMatrix selected =
        tasks.empty() ? raw : select_task_features(raw, std::set<int>(tasks.begin(), tasks.end()));
    CvConfig sub_cfg = cfg;
    sub_cfg.pca_components =
        std::min(cfg.pca_components, std::min(selected.rows - 1, selected.cols));

    GridSpec grid = GridSpec::single(point);
    if (cfg.pca_per_split) {
        auto report = run_grid_cv(selected, grid, plan, sub_cfg);
        report.config["tasks"] = tasks;
        report.finalize();
        return report;
    }
    auto [data, pipe] = preprocess(selected, sub_cfg.pca_components);
    sub_cfg.pca_per_split = false;
    auto report = run_grid_cv(data, grid, plan, sub_cfg);
    report.config["tasks"] = tasks;
    report.finalize();
    return report;
}

ExperimentReport per_task_ensemble(const FeatureMatrix& raw, const ParamPoint& point,
                                   const SplitPlan& plan, const std::vector<int>& tasks,
                                   const CvConfig& cfg) {
    if (tasks.empty()) throw ConfigError("per_task_ensemble: no tasks given");

    // Each task contributes an 18-feature model; features are preprocessed to
    // 18 components with the same double-standardization pipeline.
    std::vector<FeatureMatrix> task_data;
    task_data.reserve(tasks.size());
    for (int t : tasks) {
        FeatureMatrix sel = select_task_features(raw, {t});
        auto [data, pipe] = preprocess(sel, static_cast<std::size_t>(kFeaturesPerTask));
        task_data.push_back(std::move(data));
    }
    std::vector<std::unique_ptr<MethodRunner>> runners;
    for (auto& d : task_data) runners.push_back(std::make_unique<MethodRunner>(d, cfg));

    ExperimentReport report;
    report.config = base_config(cfg, plan);
    report.config["method"] = std::string("ensemble-") + method_name(GridSpec::single(point).method);
    report.config["params"] = point_to_json(point);
    report.config["tasks"] = tasks;

    for (std::size_t s = 0; s < plan.splits.size(); ++s) {
        const Split& split = plan.splits[s];
        std::uint64_t model_seed = derive_seed(cfg.seed, s, 1);
        std::vector<std::vector<int>> votes;
        votes.reserve(tasks.size());
        for (std::size_t t = 0; t < tasks.size(); ++t)
            votes.push_back(
                runners[t]->fit_predict(point, split.train_val(), split.test, model_seed));
        auto combined = majority_vote(votes);
        SplitResult res;
        res.split_index = s;
        res.chosen_params = point_to_json(point);
        res.test_accuracy = accuracy(combined, labels_at(raw, split.test));
        report.per_split.push_back(std::move(res));
    }
    report.finalize();
    return report;
}

nlohmann::json NoiseStudyReport::to_json() const {
    nlohmann::json j;
    j["config"] = config;
    j["config_digest"] = config_digest;
    nlohmann::json circuits_json = nlohmann::json::array();
    for (const auto& c : circuits) {
        nlohmann::json cj;
        cj["n_qubits"] = c.n_qubits;
        cj["bandwidth"] = c.bandwidth;
        cj["baseline_accuracy"] = c.baseline_accuracy;
        cj["majority_accuracy"] = c.majority_accuracy;
        cj["median_run_accuracy"] = c.median_run_accuracy;
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& r : c.runs)
            runs.push_back({{"seed", r.seed}, {"accuracy", r.accuracy}});
        cj["runs"] = runs;
        circuits_json.push_back(cj);
    }
    j["circuits"] = circuits_json;
    return j;
}

NoiseStudyReport noise_study(const FeatureMatrix& data, const std::vector<int>& qubit_sizes,
                             double bandwidth, const NoiseModel& nm, int n_runs,
                             const CvConfig& cfg) {
    if (n_runs < 1) throw ConfigError("noise study needs n_runs >= 1");
    nm.validate();
    SplitPlan plan = make_splits(data.rows, 0.8, 0.0, 0.2, 1, cfg.seed);
    const Split& split = plan.splits.front();
    FeatureMatrix train = data.take_rows(split.train);
    FeatureMatrix test = data.take_rows(split.test);
    std::vector<int> test_labels = labels_at(data, split.test);

    NoiseStudyReport report;
    report.config = base_config(cfg, plan);
    report.config["bandwidth"] = bandwidth;
    report.config["qubit_sizes"] = qubit_sizes;
    report.config["n_runs"] = n_runs;
    report.config["shots"] = nm.shots;
    report.config["t1_us"] = nm.t1_us;
    report.config["t2_us"] = nm.t2_us;

    for (int q : qubit_sizes) {
        NoiseCircuitReport cr;
        cr.n_qubits = q;
        cr.bandwidth = bandwidth;
        KernelParams kp;
        kp.kind = KernelKind::Quantum;
        kp.circuit = build_ansatz(q, static_cast<int>(data.cols), bandwidth);

        auto run_once = [&](const ExecMode& mode) {
            GramMatrix train_gram = gram(train, train, kp, mode, cfg.jobs);
            GramMatrix test_gram = gram(test, train, kp, mode, cfg.jobs);
            SvmModel model = svm_fit(train_gram, train.labels, 1.0, 1e-3);
            return svm_predict(model, test_gram);
        };

        ExecMode baseline_mode =
            ExecMode::with_shots(nm.shots, derive_seed(cfg.seed, static_cast<std::uint64_t>(q),
                                                       0xBA5Eu));
        cr.baseline_accuracy = accuracy(run_once(baseline_mode), test_labels);

        std::vector<std::vector<int>> all_preds;
        std::vector<double> run_accs;
        for (int r = 0; r < n_runs; ++r) {
            NoiseRun run;
            run.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(q),
                                   static_cast<std::uint64_t>(r));
            ExecMode mode = ExecMode::noisy(nm, run.seed);
            run.predictions = run_once(mode);
            run.accuracy = accuracy(run.predictions, test_labels);
            run_accs.push_back(run.accuracy);
            all_preds.push_back(run.predictions);
            cr.runs.push_back(std::move(run));
        }
        cr.majority_accuracy = accuracy(majority_vote(all_preds), test_labels);
        std::vector<double> sorted = run_accs;
        std::sort(sorted.begin(), sorted.end());
        cr.median_run_accuracy = sorted.size() % 2 == 1
                                     ? sorted[sorted.size() / 2]
                                     : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                              sorted[sorted.size() / 2]);
        report.circuits.push_back(std::move(cr));
    }
    report.config_digest = content_digest(report.config.dump());
    return report;
}

}  // namespace qks
