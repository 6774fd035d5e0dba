#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qks {

// Dense row-major feature matrix with +/-1 labels. Labels use +1 for class P
// (patient) and -1 for class H (healthy). Labels may be empty for matrices
// that only carry coordinates (e.g. query batches).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major
    std::vector<int> labels;   // empty or size == rows, values in {-1, +1}
    std::vector<std::string> column_names;  // empty or size == cols

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    static FeatureMatrix zeros(std::size_t r, std::size_t c) {
        FeatureMatrix m;
        m.rows = r;
        m.cols = c;
        m.data.assign(r * c, 0.0);
        return m;
    }

    // Row subset in the given index order; labels follow when present.
    FeatureMatrix take_rows(const std::vector<std::size_t>& idx) const {
        FeatureMatrix out;
        out.rows = idx.size();
        out.cols = cols;
        out.column_names = column_names;
        out.data.resize(out.rows * cols);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const double* src = data.data() + idx[i] * cols;
            std::copy(src, src + cols, out.data.begin() + i * cols);
        }
        if (!labels.empty()) {
            out.labels.resize(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) out.labels[i] = labels[idx[i]];
        }
        return out;
    }

    FeatureMatrix take_cols(const std::vector<std::size_t>& idx) const {
        FeatureMatrix out;
        out.rows = rows;
        out.cols = idx.size();
        out.labels = labels;
        out.data.resize(rows * idx.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < idx.size(); ++j)
                out.data[r * idx.size() + j] = at(r, idx[j]);
        if (!column_names.empty()) {
            out.column_names.reserve(idx.size());
            for (std::size_t j : idx) out.column_names.push_back(column_names[j]);
        }
        return out;
    }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace qks
