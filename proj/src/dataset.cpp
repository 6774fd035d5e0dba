#include "qks/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qks/common.hpp"

namespace qks {

const std::vector<std::string>& darwin_feature_stems() {
    static const std::vector<std::string> stems = {
        "air_time",         "disp_index",        "gmrt_in_air",
        "gmrt_on_paper",    "max_x_extension",   "max_y_extension",
        "mean_acc_in_air",  "mean_acc_on_paper", "mean_gmrt",
        "mean_jerk_in_air", "mean_jerk_on_paper", "mean_speed_in_air",
        "mean_speed_on_paper", "num_of_pendown", "paper_time",
        "pressure_mean",    "pressure_var",      "total_time"};
    return stems;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

bool parse_double(const std::string& raw, double& out) {
    std::string s = trim(raw);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) return false;
    return std::isfinite(out);
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows, cells as strings
};

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path.string());
    RawTable t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty dataset file: " + path.string());
    t.header = split_csv_line(line);
    for (auto& h : t.header) h = trim(h);
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        t.rows.push_back(split_csv_line(line));
    }
    return t;
}

// returns (id_col, class_col); -1 when absent
std::pair<int, int> find_special_columns(const std::vector<std::string>& header) {
    int id_col = -1, class_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "ID" || header[j] == "Id" || header[j] == "id") id_col = static_cast<int>(j);
        if (header[j] == "class") class_col = static_cast<int>(j);
    }
    return {id_col, class_col};
}

int parse_label(const std::string& raw, std::size_t data_row) {
    std::string v = trim(raw);
    if (v == "P") return +1;
    if (v == "H") return -1;
    throw DataError("row " + std::to_string(data_row + 1) +
                    ": unknown class label '" + v + "' (expected H or P)");
}

}  // namespace

std::vector<DarwinRecord> load_darwin_records(const std::filesystem::path& path) {
    RawTable t = read_table(path);
    auto [id_col, class_col] = find_special_columns(t.header);
    if (class_col < 0) throw DataError("dataset has no 'class' column: " + path.string());

    std::vector<DarwinRecord> records;
    records.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& cells = t.rows[r];
        if (cells.size() != t.header.size()) {
            throw DataError("row " + std::to_string(r + 1) + ": expected " +
                            std::to_string(t.header.size()) + " columns, found " +
                            std::to_string(cells.size()));
        }
        DarwinRecord rec;
        rec.label = parse_label(cells[class_col], r);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (static_cast<int>(j) == class_col) continue;
            if (static_cast<int>(j) == id_col) {
                rec.participant_id = trim(cells[j]);
                continue;
            }
            double v;
            if (!parse_double(cells[j], v)) {
                throw DataError("row " + std::to_string(r + 1) + ", column '" +
                                t.header[j] + "': cannot parse '" + trim(cells[j]) +
                                "' as a finite number");
            }
            rec.features.push_back(v);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

FeatureMatrix load_darwin(const std::filesystem::path& path) {
    RawTable t = read_table(path);
    auto [id_col, class_col] = find_special_columns(t.header);
    if (class_col < 0) throw DataError("dataset has no 'class' column: " + path.string());

    auto records = load_darwin_records(path);
    FeatureMatrix m;
    m.rows = records.size();
    m.cols = records.empty() ? 0 : records.front().features.size();
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (static_cast<int>(j) == id_col || static_cast<int>(j) == class_col) continue;
        m.column_names.push_back(t.header[j]);
    }
    m.data.reserve(m.rows * m.cols);
    m.labels.reserve(m.rows);
    for (const auto& rec : records) {
        if (rec.features.size() != m.cols) {
            throw DataError("inconsistent feature count across rows in " + path.string());
        }
        m.data.insert(m.data.end(), rec.features.begin(), rec.features.end());
        m.labels.push_back(rec.label);
    }
    return m;
}

std::string SchemaReport::summary() const {
    std::ostringstream os;
    if (ok()) {
        os << rows << " rows, " << n_positive << " P, " << n_negative << " H, "
           << feature_columns << " features: OK";
    } else {
        os << rows << " rows, " << errors.size() << " schema error(s)";
    }
    return os.str();
}

SchemaReport validate_darwin(const std::filesystem::path& path) {
    SchemaReport rep;
    RawTable t;
    try {
        t = read_table(path);
    } catch (const DataError& e) {
        rep.errors.push_back(e.what());
        return rep;
    }
    auto [id_col, class_col] = find_special_columns(t.header);
    if (id_col < 0) rep.errors.push_back("missing 'ID' column");
    if (class_col < 0) rep.errors.push_back("missing 'class' column");

    std::size_t n_feature_cols = t.header.size() - (id_col >= 0 ? 1 : 0) - (class_col >= 0 ? 1 : 0);
    rep.feature_columns = n_feature_cols;
    rep.rows = t.rows.size();
    if (t.header.size() != kDarwinFeatureCount + 2) {
        rep.errors.push_back("expected " + std::to_string(kDarwinFeatureCount + 2) +
                             " columns (ID + " + std::to_string(kDarwinFeatureCount) +
                             " features + class), found " + std::to_string(t.header.size()));
    }

    // Task-major naming: feature j belongs to task j/18+1; its stem must be a
    // known feature name and the stem sequence must repeat identically across
    // tasks.
    std::vector<std::string> feature_names;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (static_cast<int>(j) == id_col || static_cast<int>(j) == class_col) continue;
        feature_names.push_back(t.header[j]);
    }
    const auto& stems = darwin_feature_stems();
    std::set<std::string> stem_set(stems.begin(), stems.end());
    std::vector<std::string> first_task_stems;
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        const std::string& name = feature_names[j];
        std::size_t digits = 0;
        while (digits < name.size() &&
               std::isdigit(static_cast<unsigned char>(name[name.size() - 1 - digits])))
            ++digits;
        std::string stem = name.substr(0, name.size() - digits);
        std::string tasknum = name.substr(name.size() - digits);
        int expected_task = static_cast<int>(j) / kFeaturesPerTask + 1;
        if (digits == 0 || !stem_set.count(stem)) {
            rep.errors.push_back("column '" + name + "': not a recognized task feature name");
            continue;
        }
        if (std::stoi(tasknum) != expected_task) {
            rep.errors.push_back("column '" + name + "': expected task " +
                                 std::to_string(expected_task) + " at position " +
                                 std::to_string(j) + " (task-major order)");
        }
        if (j < static_cast<std::size_t>(kFeaturesPerTask)) {
            first_task_stems.push_back(stem);
        } else if (stem != first_task_stems[j % kFeaturesPerTask]) {
            rep.errors.push_back("column '" + name + "': feature order differs from task 1");
        }
    }

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& cells = t.rows[r];
        if (cells.size() != t.header.size()) {
            rep.errors.push_back("row " + std::to_string(r + 1) + ": expected " +
                                 std::to_string(t.header.size()) + " cells, found " +
                                 std::to_string(cells.size()));
            continue;
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (static_cast<int>(j) == id_col) continue;
            if (static_cast<int>(j) == class_col) {
                std::string v = trim(cells[j]);
                if (v == "P") ++rep.n_positive;
                else if (v == "H") ++rep.n_negative;
                else rep.errors.push_back("row " + std::to_string(r + 1) +
                                          ": unknown class label '" + v + "'");
                continue;
            }
            double v;
            if (!parse_double(cells[j], v)) {
                rep.errors.push_back("row " + std::to_string(r + 1) + ", column '" +
                                     t.header[j] + "': non-numeric cell '" + trim(cells[j]) + "'");
            }
        }
    }

    if (id_col >= 0) {
        std::set<std::string> seen;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            if (t.rows[r].size() != t.header.size()) continue;
            std::string id = trim(t.rows[r][id_col]);
            if (!seen.insert(id).second) {
                rep.errors.push_back("row " + std::to_string(r + 1) +
                                     ": duplicate participant id '" + id + "'");
            }
        }
    }
    return rep;
}

}  // namespace qks
