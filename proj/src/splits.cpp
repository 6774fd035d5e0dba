#include "qks/splits.hpp"

#include <cmath>

#include "qks/common.hpp"
#include "qks/dataset.hpp"
#include "qks/rng.hpp"

namespace qks {

SplitPlan make_splits(std::size_t n, double train_frac, double val_frac, double test_frac,
                      std::size_t n_splits, std::uint64_t seed) {
    if (train_frac < 0 || val_frac < 0 || test_frac < 0)
        throw ConfigError("split fractions must be nonnegative");
    double total = train_frac + val_frac + test_frac;
    if (total > 1.0 + 1e-9) throw ConfigError("split fractions sum to more than 1");
    if (train_frac <= 0 || test_frac <= 0)
        throw ConfigError("train and test fractions must be positive");

    std::size_t n_test = static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(n)));
    std::size_t n_val = static_cast<std::size_t>(std::llround(val_frac * static_cast<double>(n)));
    if (n_test + n_val >= n) throw ConfigError("split fractions leave no training data");
    std::size_t n_train = n - n_test - n_val;

    SplitPlan plan;
    plan.seed = seed;
    plan.n_splits = n_splits;
    plan.train_frac = train_frac;
    plan.val_frac = val_frac;
    plan.test_frac = test_frac;
    plan.splits.reserve(n_splits);
    for (std::size_t s = 0; s < n_splits; ++s) {
        Rng rng(derive_seed(seed, s));
        auto perm = shuffled_indices(n, rng);
        Split sp;
        sp.train.assign(perm.begin(), perm.begin() + n_train);
        sp.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
        sp.test.assign(perm.begin() + n_train + n_val, perm.begin() + n_train + n_val + n_test);
        plan.splits.push_back(std::move(sp));
    }
    return plan;
}

const std::set<int>& tasks_memory() {
    static const std::set<int> t = {1, 14, 18, 20, 23};
    return t;
}

const std::set<int>& tasks_graphic() {
    static const std::set<int> t = {2, 3, 4, 5, 21, 24};
    return t;
}

const std::set<int>& tasks_copy() {
    static const std::set<int> t = {6, 7, 8, 9, 10, 11, 12, 13, 15, 16, 17, 19, 22, 25};
    return t;
}

const std::set<int>& tasks_for_category(char category) {
    switch (category) {
        case 'M': return tasks_memory();
        case 'G': return tasks_graphic();
        case 'C': return tasks_copy();
        default: throw ConfigError(std::string("unknown task category '") + category + "'");
    }
}

FeatureMatrix select_task_features(const FeatureMatrix& m, const std::set<int>& tasks) {
    if (m.cols != static_cast<std::size_t>(kDarwinFeatureCount))
        throw ComputeError("select_task_features expects " +
                           std::to_string(kDarwinFeatureCount) + " columns, got " +
                           std::to_string(m.cols));
    std::vector<std::size_t> cols;
    for (int t : tasks) {
        if (t < 1 || t > kTaskCount)
            throw ConfigError("invalid task id " + std::to_string(t));
        for (int f = 0; f < kFeaturesPerTask; ++f)
            cols.push_back(static_cast<std::size_t>((t - 1) * kFeaturesPerTask + f));
    }
    return m.take_cols(cols);
}

}  // namespace qks
