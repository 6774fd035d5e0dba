#pragma once

#include <cstdint>
#include <cstddef>
#include <set>
#include <vector>

#include "qks/matrix.hpp"

namespace qks {

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;

    std::vector<std::size_t> train_val() const {
        std::vector<std::size_t> out = train;
        out.insert(out.end(), val.begin(), val.end());
        return out;
    }
};

struct SplitPlan {
    std::uint64_t seed = 0;
    std::size_t n_splits = 0;
    double train_frac = 0, val_frac = 0, test_frac = 0;
    std::vector<Split> splits;
};

// ShuffleSplit: each split is an independent random permutation of 0..n-1
// carved into train/val/test. Sizes follow the rounding rule
// test = round(test_frac*n), val = round(val_frac*n), train = remainder.
// Deterministic given seed; split s uses a stream derived from (seed, s).
SplitPlan make_splits(std::size_t n, double train_frac, double val_frac, double test_frac,
                      std::size_t n_splits, std::uint64_t seed);

// Tasks are grouped per the protocol's three categories.
//   M: memory & dictation, G: graphic, C: copy
const std::set<int>& tasks_memory();
const std::set<int>& tasks_graphic();
const std::set<int>& tasks_copy();
const std::set<int>& tasks_for_category(char category);  // 'M' | 'G' | 'C'

// Selects the 18 columns of each listed task (ids 1..25) from a 450-column
// task-major matrix, ascending task order.
FeatureMatrix select_task_features(const FeatureMatrix& m, const std::set<int>& tasks);

}  // namespace qks
