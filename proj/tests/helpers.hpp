#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qks/matrix.hpp"
#include "qks/rng.hpp"

namespace qks::test {

// Writes content to a unique temp file; removed on destruction.
class TempFile {
  public:
    explicit TempFile(const std::string& content, const std::string& suffix = ".csv") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("qks_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                 suffix);
        std::ofstream out(path_);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

// Two-class Gaussian blobs, labels +/-1, class means at +/-separation/2 on
// every coordinate.
inline FeatureMatrix make_blobs(std::size_t n_per_class, std::size_t dims, double separation,
                                std::uint64_t seed) {
    Rng rng(seed);
    FeatureMatrix m = FeatureMatrix::zeros(2 * n_per_class, dims);
    m.labels.resize(2 * n_per_class);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        int label = i < n_per_class ? +1 : -1;
        m.labels[i] = label;
        for (std::size_t d = 0; d < dims; ++d)
            m.at(i, d) = rng.normal() + 0.5 * separation * label;
    }
    return m;
}

inline FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    FeatureMatrix m = FeatureMatrix::zeros(rows, cols);
    for (auto& v : m.data) v = rng.normal();
    return m;
}

}  // namespace qks::test
