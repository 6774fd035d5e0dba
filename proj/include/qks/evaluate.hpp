#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qks/grid.hpp"
#include "qks/matrix.hpp"
#include "qks/noise.hpp"
#include "qks/preprocess.hpp"
#include "qks/splits.hpp"

namespace qks {

struct CvConfig {
    std::uint64_t seed = 42;
    int jobs = 1;
    ExecMode mode = ExecMode::exact();
    int qsvc_qubits = 12;
    bool pca_per_split = false;     // refit preprocessing inside each split
    std::size_t pca_components = 24;
};

struct SplitResult {
    std::size_t split_index = 0;
    nlohmann::json chosen_params;
    double test_accuracy = 0.0;  // fraction in [0, 1]
};

struct ExperimentReport {
    std::vector<SplitResult> per_split;
    double mean_acc_pct = 0.0;
    double std_acc_pct = 0.0;  // population std
    nlohmann::json config;
    std::string config_digest;

    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);
    void write_csv(const std::string& path) const;
    void finalize();  // recompute mean/std and digest from per_split + config
};

// FNV-1a 64 over a canonical string; used for experiment config digests.
std::string content_digest(const std::string& payload);

// Trains every grid point on the training part, scores on validation, picks
// the best (ties go to the earlier grid point), refits on train+validation
// and scores on test. Mean/std are across splits, in percent.
//
// `data` is the preprocessed matrix unless cfg.pca_per_split is set, in
// which case it is the raw matrix and preprocessing is refit per split on
// the train+validation rows.
ExperimentReport run_grid_cv(const FeatureMatrix& data, const GridSpec& grid,
                             const SplitPlan& plan, const CvConfig& cfg);

// Per-sample sign of the vote sum; exact ties predict +1.
std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes);

// Most frequently chosen hyperparameters in a report (ties: first seen).
ParamPoint modal_params(const ExperimentReport& report);

// Trains one model per listed task on that task's 18 features (preprocessed
// to 18 components), combines test predictions by majority vote per split.
// `raw` must be the 450-column task-major matrix.
ExperimentReport per_task_ensemble(const FeatureMatrix& raw, const ParamPoint& point,
                                   const SplitPlan& plan, const std::vector<int>& tasks,
                                   const CvConfig& cfg);

// Fixed-hyperparameter run on a column subset (task-category experiments):
// select columns, preprocess to cfg.pca_components, fit/score per split.
ExperimentReport fixed_point_cv(const FeatureMatrix& raw, const std::vector<int>& tasks,
                                const ParamPoint& point, const SplitPlan& plan,
                                const CvConfig& cfg);

struct NoiseRun {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    std::vector<int> predictions;
};

struct NoiseCircuitReport {
    int n_qubits = 0;
    double bandwidth = 0.0;
    double baseline_accuracy = 0.0;  // noiseless shot-mode run
    std::vector<NoiseRun> runs;
    double majority_accuracy = 0.0;
    double median_run_accuracy = 0.0;
};

struct NoiseStudyReport {
    std::vector<NoiseCircuitReport> circuits;
    nlohmann::json config;
    std::string config_digest;

    nlohmann::json to_json() const;
};

// Single-split noise study: a shot-mode baseline plus n_runs noisy
// executions with distinct seeds; per-run accuracies and the majority-vote
// accuracy over the noisy predictions.
NoiseStudyReport noise_study(const FeatureMatrix& data, const std::vector<int>& qubit_sizes,
                             double bandwidth, const NoiseModel& nm, int n_runs,
                             const CvConfig& cfg);

// Fixed task lists for the best-5 ensembles.
const std::vector<int>& best5_tasks_classical();  // {21, 17, 16, 7, 23}
const std::vector<int>& best5_tasks_quantum();    // {21, 17, 24, 14, 23}
std::vector<int> all_task_ids();                  // {1..25}

}  // namespace qks
