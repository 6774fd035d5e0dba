#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qks/common.hpp"
#include "qks/kernels.hpp"
#include "qks/knn.hpp"
#include "qks/svm.hpp"
#include "qks/tree.hpp"

using namespace qks;

namespace {

KernelParams linear_params() {
    KernelParams p;
    p.kind = KernelKind::Linear;
    p.gamma_scale = false;
    return p;
}

GramMatrix linear_gram(const FeatureMatrix& m) { return gram(m, m, linear_params()); }

}  // namespace

TEST_CASE("svm two-point problem solves in closed form") {
    // points x0=0 (y=-1), x1=1 (y=+1), linear kernel, C=10
    // dual: maximize a0+a1 - a^2/2 with a0=a1=a -> a=2; f(x)=2x+b, f(0)=-1 => b=-1
    FeatureMatrix m = FeatureMatrix::zeros(2, 1);
    m.at(0, 0) = 0;
    m.at(1, 0) = 1;
    GramMatrix k = linear_gram(m);
    SvmModel model = svm_fit(k, {-1, +1}, 10.0, 1e-6);
    CHECK(model.alphas[0] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(model.alphas[1] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(model.bias == doctest::Approx(-1.0).epsilon(1e-4));
    auto dv = svm_decision_values(model, k);
    CHECK(dv[0] == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(dv[1] == doctest::Approx(+1.0).epsilon(1e-4));
}

TEST_CASE("svm separates a linearly separable toy set perfectly") {
    FeatureMatrix m = FeatureMatrix::zeros(4, 2);
    double pts[4][2] = {{0, 0}, {0, 1}, {3, 3}, {3, 4}};
    std::vector<int> y = {-1, -1, +1, +1};
    for (int i = 0; i < 4; ++i) {
        m.at(i, 0) = pts[i][0];
        m.at(i, 1) = pts[i][1];
    }
    GramMatrix k = linear_gram(m);
    SvmModel model = svm_fit(k, y, 100.0, 1e-5);
    CHECK(svm_predict(model, k) == y);
}

TEST_CASE("svm dual constraints hold on random problems") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        FeatureMatrix m = qks::test::make_blobs(6, 3, 1.0, seed);
        GramMatrix k = linear_gram(m);
        SvmModel model = svm_fit(k, m.labels, 1.0, 1e-4);
        double sum = 0.0;
        for (std::size_t i = 0; i < model.alphas.size(); ++i) {
            CHECK(model.alphas[i] >= -1e-12);
            CHECK(model.alphas[i] <= 1.0 + 1e-12);
            sum += model.alphas[i] * model.train_labels[i];
        }
        CHECK(std::abs(sum) <= 1e-6);
        for (std::size_t i : model.support_idx) CHECK(model.alphas[i] > 1e-8);
    }
}

TEST_CASE("svm matches the brute-force dual on 50 random 5-point problems") {
    int flips = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(9000 + seed);
        FeatureMatrix m = FeatureMatrix::zeros(5, 2);
        std::vector<int> y(5);
        bool pos = false, neg = false;
        for (int i = 0; i < 5; ++i) {
            y[i] = rng.uniform() < 0.5 ? -1 : +1;
            if (i == 3 && !pos && !neg) y[i] = +1;
            (y[i] == 1 ? pos : neg) = true;
            for (int d = 0; d < 2; ++d) m.at(i, d) = rng.normal() + 0.4 * y[i];
        }
        if (!pos) y[0] = +1;
        if (!neg) y[1] = -1;
        m.labels = y;
        const double C = 1.0;
        GramMatrix k = linear_gram(m);

        SvmModel model = svm_fit(k, y, C, 1e-6);
        qks::test::OracleSolution oracle = qks::test::brute_force_dual(k, y, C);
        double smo_obj = model.dual_objective(k);
        CHECK(std::abs(smo_obj - oracle.objective) <= 1e-4);

        // identical predictions on the training points
        auto smo_pred = svm_predict(model, k);
        auto oracle_pred = qks::test::oracle_predict(oracle, y, k, k, C);
        for (std::size_t i = 0; i < 5; ++i)
            if (smo_pred[i] != oracle_pred[i]) ++flips;
    }
    CHECK(flips == 0);
}

TEST_CASE("svm predictions match brute force on a 6-point set with queries") {
    Rng rng(4242);
    FeatureMatrix m = FeatureMatrix::zeros(6, 2);
    std::vector<int> y = {+1, +1, +1, -1, -1, -1};
    for (int i = 0; i < 6; ++i)
        for (int d = 0; d < 2; ++d) m.at(i, d) = rng.normal() + 0.8 * y[i];
    GramMatrix k = linear_gram(m);
    SvmModel model = svm_fit(k, y, 1.0, 1e-6);
    qks::test::OracleSolution oracle = qks::test::brute_force_dual(k, y, 1.0);

    FeatureMatrix queries = qks::test::random_matrix(10, 2, 77);
    GramMatrix kq = gram(queries, m, linear_params());
    CHECK(svm_predict(model, kq) == qks::test::oracle_predict(oracle, y, k, kq, 1.0));
}

TEST_CASE("svm is invariant under permuting the training points") {
    FeatureMatrix m = qks::test::make_blobs(8, 2, 1.5, 5);
    GramMatrix k = linear_gram(m);
    SvmModel model = svm_fit(k, m.labels, 1.0, 1e-5);

    std::vector<std::size_t> perm = {5, 2, 9, 0, 7, 1, 15, 3, 11, 4, 13, 6, 8, 10, 12, 14};
    FeatureMatrix pm = m.take_rows(perm);
    GramMatrix pk = gram(pm, pm, linear_params());
    SvmModel pmodel = svm_fit(pk, pm.labels, 1.0, 1e-5);

    FeatureMatrix queries = qks::test::random_matrix(12, 2, 31);
    auto pred = svm_predict(model, gram(queries, m, linear_params()));
    auto ppred = svm_predict(pmodel, gram(queries, pm, linear_params()));
    CHECK(pred == ppred);
}

TEST_CASE("svm predicts a memorized support vector's class with large margin") {
    FeatureMatrix m = qks::test::make_blobs(10, 2, 4.0, 8);
    GramMatrix k = linear_gram(m);
    SvmModel model = svm_fit(k, m.labels, 10.0, 1e-5);
    REQUIRE(!model.support_idx.empty());
    std::size_t sv = model.support_idx.front();
    FeatureMatrix one = m.take_rows({sv});
    auto pred = svm_predict(model, gram(one, m, linear_params()));
    CHECK(pred[0] == m.labels[sv]);
}

TEST_CASE("svm input validation") {
    FeatureMatrix m = qks::test::make_blobs(3, 2, 1.0, 1);
    GramMatrix k = linear_gram(m);
    CHECK_THROWS_AS(svm_fit(k, std::vector<int>(6, +1), 1.0, 1e-3), ComputeError);
    GramMatrix bad = k;
    bad.at(0, 1) += 0.5;  // asymmetric
    CHECK_THROWS_AS(svm_fit(bad, m.labels, 1.0, 1e-3), ComputeError);
}

TEST_CASE("knn identifies an exact training point with k=1") {
    FeatureMatrix m = qks::test::make_blobs(5, 2, 2.0, 3);
    KnnModel model{m, 1, KnnMetric::Euclidean, 3.0, KnnWeights::Uniform};
    auto pred = knn_predict(model, m);
    CHECK(pred == m.labels);
}

TEST_CASE("knn majority among 3 neighbors labeled ++- is +") {
    FeatureMatrix m = FeatureMatrix::zeros(3, 1);
    m.at(0, 0) = 0.0;
    m.at(1, 0) = 1.0;
    m.at(2, 0) = 2.0;
    m.labels = {+1, +1, -1};
    FeatureMatrix q = FeatureMatrix::zeros(1, 1);
    q.at(0, 0) = 0.5;
    KnnModel model{m, 3, KnnMetric::Euclidean, 3.0, KnnWeights::Uniform};
    CHECK(knn_predict(model, q)[0] == +1);
}

TEST_CASE("knn matches an exhaustive distance-sort oracle") {
    FeatureMatrix train = qks::test::make_blobs(10, 3, 1.0, 17);
    FeatureMatrix queries = qks::test::random_matrix(8, 3, 18);
    for (auto metric : {KnnMetric::Euclidean, KnnMetric::Manhattan, KnnMetric::Minkowski}) {
        for (auto weights : {KnnWeights::Uniform, KnnWeights::Distance}) {
            KnnModel model{train, 5, metric, 3.0, weights};
            auto pred = knn_predict(model, queries);
            for (std::size_t q = 0; q < queries.rows; ++q) {
                std::vector<std::pair<double, std::size_t>> d;
                for (std::size_t i = 0; i < train.rows; ++i) {
                    double dist = 0.0;
                    for (std::size_t c = 0; c < 3; ++c) {
                        double diff = std::abs(queries.at(q, c) - train.at(i, c));
                        if (metric == KnnMetric::Euclidean) dist += diff * diff;
                        else if (metric == KnnMetric::Manhattan) dist += diff;
                        else dist += diff * diff * diff;
                    }
                    if (metric == KnnMetric::Euclidean) dist = std::sqrt(dist);
                    if (metric == KnnMetric::Minkowski) dist = std::cbrt(dist);
                    d.push_back({dist, i});
                }
                std::sort(d.begin(), d.end());
                double sp = 0, sn = 0;
                for (int t = 0; t < 5; ++t) {
                    double w = weights == KnnWeights::Uniform ? 1.0 : 1.0 / (d[t].first + 1e-12);
                    (train.labels[d[t].second] == +1 ? sp : sn) += w;
                }
                int expect = sp >= sn ? +1 : -1;
                CHECK(pred[q] == expect);
            }
        }
    }
}

TEST_CASE("knn with k=N predicts the global majority under uniform weights") {
    FeatureMatrix train = qks::test::make_blobs(7, 2, 0.5, 23);
    train.labels[0] = +1;  // 8 positive, 6 negative
    KnnModel model{train, 14, KnnMetric::Euclidean, 3.0, KnnWeights::Uniform};
    FeatureMatrix queries = qks::test::random_matrix(10, 2, 29);
    for (int v : knn_predict(model, queries)) CHECK(v == +1);
}

TEST_CASE("knn rejects k out of range") {
    FeatureMatrix train = qks::test::make_blobs(3, 2, 1.0, 5);
    KnnModel model{train, 7, KnnMetric::Euclidean, 3.0, KnnWeights::Uniform};
    CHECK_THROWS_AS(knn_predict(model, train), ConfigError);
}

TEST_CASE("tree collapses pure data to a single leaf") {
    FeatureMatrix m = qks::test::random_matrix(6, 2, 2);
    m.labels.assign(6, +1);
    TreeModel t = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Best, {});
    CHECK(t.nodes.size() == 1);
    CHECK(t.nodes[0].leaf);
    CHECK(t.nodes[0].label == +1);
}

TEST_CASE("tree picks the impurity-minimizing threshold on 1-d data") {
    // values 0,1,2,3 labels -,-,+,+; candidates 0.5, 1.5, 2.5
    FeatureMatrix m = FeatureMatrix::zeros(4, 1);
    for (int i = 0; i < 4; ++i) m.at(i, 0) = i;
    m.labels = {-1, -1, +1, +1};

    // oracle: enumerate the three candidate thresholds
    auto gini = [](int neg, int pos) {
        if (neg + pos == 0) return 0.0;
        double p = double(pos) / (neg + pos);
        return 1.0 - p * p - (1.0 - p) * (1.0 - p);
    };
    double best_thr = -1, best_score = 1e300;
    for (double thr : {0.5, 1.5, 2.5}) {
        int ln = 0, lp = 0, rn = 0, rp = 0;
        for (int i = 0; i < 4; ++i) {
            bool left = m.at(i, 0) <= thr;
            bool pos = m.labels[i] == +1;
            (left ? (pos ? lp : ln) : (pos ? rp : rn))++;
        }
        double score = (ln + lp) / 4.0 * gini(ln, lp) + (rn + rp) / 4.0 * gini(rn, rp);
        if (score < best_score) {
            best_score = score;
            best_thr = thr;
        }
    }
    CHECK(best_thr == doctest::Approx(1.5));

    TreeModel t = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Best, {});
    REQUIRE(!t.nodes[0].leaf);
    CHECK(t.nodes[0].threshold == doctest::Approx(1.5));
    CHECK(tree_predict(t, m) == m.labels);

    // depth-1 tree routes 0.7 to the left (negative) leaf
    FeatureMatrix q = FeatureMatrix::zeros(1, 1);
    q.at(0, 0) = 0.7;
    TreeLimits depth1;
    depth1.max_depth = 1;
    TreeModel shallow = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Best, depth1);
    CHECK(tree_predict(shallow, q)[0] == -1);
}

TEST_CASE("tree reaches full training accuracy on consistent data") {
    FeatureMatrix m = qks::test::make_blobs(15, 3, 0.3, 44);  // heavily overlapping
    for (auto crit : {TreeCriterion::Gini, TreeCriterion::Entropy}) {
        TreeModel t = tree_fit(m, crit, TreeSplitter::Best, {});
        auto pred = tree_predict(t, m);
        CHECK(pred == m.labels);
    }
    // 2-d xor needs a zero-gain first split
    FeatureMatrix x = FeatureMatrix::zeros(4, 2);
    double pts[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int i = 0; i < 4; ++i) {
        x.at(i, 0) = pts[i][0];
        x.at(i, 1) = pts[i][1];
    }
    x.labels = {+1, -1, -1, +1};
    TreeModel t = tree_fit(x, TreeCriterion::Gini, TreeSplitter::Best, {});
    CHECK(tree_predict(t, x) == x.labels);
}

TEST_CASE("tree training accuracy is nonincreasing in min_samples_leaf") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        FeatureMatrix m = qks::test::make_blobs(20, 3, 0.8, seed);
        double prev = 2.0;
        for (int msl : {1, 2, 5, 10}) {
            TreeLimits lim;
            lim.min_samples_leaf = msl;
            TreeModel t = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Best, lim);
            auto pred = tree_predict(t, m);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < m.rows; ++i)
                if (pred[i] == m.labels[i]) ++hits;
            double acc = double(hits) / m.rows;
            CHECK(acc <= prev + 1e-12);
            prev = acc;
        }
    }
}

TEST_CASE("tree node counts track the routed samples") {
    FeatureMatrix m = qks::test::make_blobs(12, 2, 1.0, 7);
    TreeModel t = tree_fit(m, TreeCriterion::Entropy, TreeSplitter::Best, {});
    CHECK(t.nodes[0].count_neg + t.nodes[0].count_pos == m.rows);
    for (const auto& n : t.nodes) {
        if (n.leaf) continue;
        std::size_t child_total = t.nodes[n.left].count_neg + t.nodes[n.left].count_pos +
                                  t.nodes[n.right].count_neg + t.nodes[n.right].count_pos;
        CHECK(child_total == n.count_neg + n.count_pos);
    }
}

TEST_CASE("random splitter is reproducible by seed") {
    FeatureMatrix m = qks::test::make_blobs(15, 4, 0.6, 91);
    TreeModel a = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Random, {}, 5);
    TreeModel b = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Random, {}, 5);
    TreeModel c = tree_fit(m, TreeCriterion::Gini, TreeSplitter::Random, {}, 6);
    FeatureMatrix q = qks::test::random_matrix(20, 4, 17);
    CHECK(tree_predict(a, q) == tree_predict(b, q));
    CHECK(a.nodes.size() == b.nodes.size());
    (void)c;  // usually differs; not asserted
}
