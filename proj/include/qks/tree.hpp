#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qks/matrix.hpp"

namespace qks {

enum class TreeCriterion { Gini, Entropy };
enum class TreeSplitter { Best, Random };

std::string criterion_name(TreeCriterion c);
TreeCriterion criterion_from_name(const std::string& s);

struct TreeLimits {
    int max_depth = -1;          // -1 = unlimited
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

struct TreeNode {
    bool leaf = true;
    int feature = -1;
    double threshold = 0.0;
    int left = -1, right = -1;   // node indices
    int label = +1;              // leaves
    std::size_t count_neg = 0, count_pos = 0;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // root at index 0
    TreeCriterion criterion = TreeCriterion::Gini;
    TreeSplitter splitter = TreeSplitter::Best;
    TreeLimits limits;

    std::string to_json() const;
};

// CART-style binary tree. Best splitter scans midpoints between sorted
// distinct values per feature; random splitter draws one uniform threshold
// per feature. Splits must leave min_samples_leaf on both sides. Leaf label
// is the majority class, ties toward +1.
TreeModel tree_fit(const FeatureMatrix& data, TreeCriterion criterion, TreeSplitter splitter,
                   const TreeLimits& limits, std::uint64_t seed = 0);

// Routes by threshold comparison, x[feature] <= threshold goes left.
std::vector<int> tree_predict(const TreeModel& model, const FeatureMatrix& queries);

}  // namespace qks
