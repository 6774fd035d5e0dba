#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qks/matrix.hpp"

namespace qks {

inline constexpr int kTaskCount = 25;
inline constexpr int kFeaturesPerTask = 18;
inline constexpr int kDarwinFeatureCount = kTaskCount * kFeaturesPerTask;  // 450

// Per-task feature column stems, in canonical file order.
const std::vector<std::string>& darwin_feature_stems();

// One parsed row of the source CSV.
struct DarwinRecord {
    std::string participant_id;
    std::vector<double> features;
    int label = 0;  // +1 = P, -1 = H
};

// Loads a DARWIN-schema CSV: header row, `ID` column (dropped), `class`
// column with values H/P (mapped to -1/+1), every other column numeric.
// Column order is preserved. Throws DataError with row/column context.
FeatureMatrix load_darwin(const std::filesystem::path& path);

std::vector<DarwinRecord> load_darwin_records(const std::filesystem::path& path);

struct SchemaReport {
    std::size_t rows = 0;
    std::size_t feature_columns = 0;
    std::size_t n_positive = 0;  // P
    std::size_t n_negative = 0;  // H
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
    std::string summary() const;
};

// Full schema validation: column count (452 incl. ID and class for the
// canonical file), task-major column naming, numeric parse of every cell,
// label values, duplicate participant ids.
SchemaReport validate_darwin(const std::filesystem::path& path);

}  // namespace qks
