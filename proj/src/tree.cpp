#include "qks/tree.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "qks/common.hpp"
#include "qks/rng.hpp"

namespace qks {

std::string criterion_name(TreeCriterion c) {
    return c == TreeCriterion::Gini ? "gini" : "entropy";
}

TreeCriterion criterion_from_name(const std::string& s) {
    if (s == "gini") return TreeCriterion::Gini;
    if (s == "entropy") return TreeCriterion::Entropy;
    throw ConfigError("unknown tree criterion '" + s + "'");
}

namespace {

double impurity(std::size_t neg, std::size_t pos, TreeCriterion crit) {
    std::size_t total = neg + pos;
    if (total == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(total);
    double q = 1.0 - p;
    if (crit == TreeCriterion::Gini) return 1.0 - p * p - q * q;
    double h = 0.0;
    if (p > 0) h -= p * std::log2(p);
    if (q > 0) h -= q * std::log2(q);
    return h;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();  // weighted child impurity
};

struct Builder {
    const FeatureMatrix& data;
    TreeCriterion criterion;
    TreeSplitter splitter;
    TreeLimits limits;
    Rng rng;
    std::vector<TreeNode> nodes;

    Builder(const FeatureMatrix& d, TreeCriterion c, TreeSplitter s, const TreeLimits& l,
            std::uint64_t seed)
        : data(d), criterion(c), splitter(s), limits(l), rng(seed) {}

    // weighted impurity of the two sides induced by (feature, threshold)
    double split_score(const std::vector<std::size_t>& idx, int feature, double thr) const {
        std::size_t ln = 0, lp = 0, rn = 0, rp = 0;
        for (std::size_t i : idx) {
            bool left = data.at(i, feature) <= thr;
            bool pos = data.labels[i] == +1;
            if (left) (pos ? lp : ln)++;
            else (pos ? rp : rn)++;
        }
        std::size_t left_total = ln + lp, right_total = rn + rp;
        std::size_t msl = static_cast<std::size_t>(limits.min_samples_leaf);
        if (left_total < msl || right_total < msl)
            return std::numeric_limits<double>::infinity();
        double total = static_cast<double>(idx.size());
        return (left_total / total) * impurity(ln, lp, criterion) +
               (right_total / total) * impurity(rn, rp, criterion);
    }

    SplitChoice best_split(const std::vector<std::size_t>& idx) {
        SplitChoice best;
        std::vector<double> values;
        for (std::size_t f = 0; f < data.cols; ++f) {
            if (splitter == TreeSplitter::Random) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (std::size_t i : idx) {
                    lo = std::min(lo, data.at(i, f));
                    hi = std::max(hi, data.at(i, f));
                }
                if (!(hi > lo)) continue;
                double thr = lo + rng.uniform() * (hi - lo);
                double score = split_score(idx, static_cast<int>(f), thr);
                if (score < best.score) {
                    best = {true, static_cast<int>(f), thr, score};
                }
                continue;
            }
            values.clear();
            for (std::size_t i : idx) values.push_back(data.at(i, f));
            std::sort(values.begin(), values.end());
            for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                if (values[v + 1] <= values[v]) continue;
                double thr = 0.5 * (values[v] + values[v + 1]);
                double score = split_score(idx, static_cast<int>(f), thr);
                if (score < best.score) {
                    best = {true, static_cast<int>(f), thr, score};
                }
            }
        }
        return best;
    }

    int build(const std::vector<std::size_t>& idx, int depth) {
        std::size_t neg = 0, pos = 0;
        for (std::size_t i : idx) (data.labels[i] == +1 ? pos : neg)++;

        int node_id = static_cast<int>(nodes.size());
        nodes.push_back({});
        TreeNode& placeholder = nodes.back();
        placeholder.count_neg = neg;
        placeholder.count_pos = pos;
        placeholder.label = pos >= neg ? +1 : -1;

        bool pure = neg == 0 || pos == 0;
        bool depth_stop = limits.max_depth >= 0 && depth >= limits.max_depth;
        bool size_stop = idx.size() < static_cast<std::size_t>(limits.min_samples_split);
        if (pure || depth_stop || size_stop) return node_id;

        SplitChoice choice = best_split(idx);
        if (!choice.found) return node_id;
        // Zero-gain splits are allowed (XOR-like data needs them); recursion
        // terminates because midpoint thresholds leave both sides nonempty.

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (data.at(i, choice.feature) <= choice.threshold) left_idx.push_back(i);
            else right_idx.push_back(i);
        }
        if (left_idx.empty() || right_idx.empty()) return node_id;

        int left = build(left_idx, depth + 1);
        int right = build(right_idx, depth + 1);
        TreeNode& node = nodes[node_id];
        node.leaf = false;
        node.feature = choice.feature;
        node.threshold = choice.threshold;
        node.left = left;
        node.right = right;
        return node_id;
    }
};

}  // namespace

TreeModel tree_fit(const FeatureMatrix& data, TreeCriterion criterion, TreeSplitter splitter,
                   const TreeLimits& limits, std::uint64_t seed) {
    if (data.rows == 0) throw ComputeError("tree_fit: empty dataset");
    if (data.labels.size() != data.rows) throw ComputeError("tree_fit: missing labels");
    Builder b(data, criterion, splitter, limits, seed);
    std::vector<std::size_t> idx(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) idx[i] = i;
    b.build(idx, 0);
    TreeModel model;
    model.nodes = std::move(b.nodes);
    model.criterion = criterion;
    model.splitter = splitter;
    model.limits = limits;
    return model;
}

std::vector<int> tree_predict(const TreeModel& model, const FeatureMatrix& queries) {
    std::vector<int> out(queries.rows);
    for (std::size_t q = 0; q < queries.rows; ++q) {
        int node = 0;
        while (!model.nodes[node].leaf) {
            const TreeNode& nd = model.nodes[node];
            if (nd.feature < 0 || static_cast<std::size_t>(nd.feature) >= queries.cols)
                throw ComputeError("tree_predict: feature index out of range");
            node = queries.at(q, nd.feature) <= nd.threshold ? nd.left : nd.right;
        }
        out[q] = model.nodes[node].label;
    }
    return out;
}

std::string TreeModel::to_json() const {
    nlohmann::json j;
    j["criterion"] = criterion_name(criterion);
    j["splitter"] = splitter == TreeSplitter::Best ? "best" : "random";
    j["max_depth"] = limits.max_depth;
    j["min_samples_split"] = limits.min_samples_split;
    j["min_samples_leaf"] = limits.min_samples_leaf;
    nlohmann::json nodes_json = nlohmann::json::array();
    for (const auto& n : nodes) {
        nlohmann::json nj;
        nj["leaf"] = n.leaf;
        if (n.leaf) {
            nj["label"] = n.label;
            nj["counts"] = {n.count_neg, n.count_pos};
        } else {
            nj["feature"] = n.feature;
            nj["threshold"] = n.threshold;
            nj["left"] = n.left;
            nj["right"] = n.right;
        }
        nodes_json.push_back(nj);
    }
    j["nodes"] = nodes_json;
    return j.dump(2);
}

}  // namespace qks
