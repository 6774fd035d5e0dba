// Generates a synthetic dataset with the DARWIN file schema: 174 rows,
// 25 tasks x 18 features plus ID and class columns, 89 P / 85 H. The class
// structure is a participant-level severity factor plus per-task effects of
// varying strength, so per-task models differ in skill and the full feature
// set is learnable but not separable. Deterministic given --seed.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "qks/dataset.hpp"
#include "qks/rng.hpp"

namespace {

struct FeatureSpec {
    const char* stem;
    double scale;   // typical magnitude
    double cv;      // lognormal coefficient of variation
    double effect;  // class effect in latent sigma units, sign = direction for P
    bool integer;
};

// One entry per feature stem, canonical column order.
const FeatureSpec kFeatures[] = {
    {"air_time", 3000, 0.45, +0.80, false},
    {"disp_index", 0.10, 0.35, -0.40, false},
    {"gmrt_in_air", 120, 0.40, +0.80, false},
    {"gmrt_on_paper", 90, 0.40, +0.75, false},
    {"max_x_extension", 1200, 0.30, -0.30, false},
    {"max_y_extension", 900, 0.30, -0.30, false},
    {"mean_acc_in_air", 0.80, 0.40, -0.40, false},
    {"mean_acc_on_paper", 0.60, 0.40, -0.40, false},
    {"mean_gmrt", 100, 0.40, +0.80, false},
    {"mean_jerk_in_air", 0.05, 0.45, +0.50, false},
    {"mean_jerk_on_paper", 0.03, 0.45, +0.50, false},
    {"mean_speed_in_air", 2.5, 0.35, -0.70, false},
    {"mean_speed_on_paper", 1.8, 0.35, -0.70, false},
    {"num_of_pendown", 12, 0.40, +0.60, true},
    {"paper_time", 5000, 0.45, +0.70, false},
    {"pressure_mean", 1500, 0.25, -0.50, false},
    {"pressure_var", 90000, 0.50, +0.30, false},
    {"total_time", 8000, 0.45, +0.90, false},
};

double task_strength(int task) {
    static const std::map<int, double> overrides = {
        {21, 1.20}, {17, 1.10}, {16, 1.05}, {7, 1.00}, {23, 1.00}, {24, 0.95},
        {14, 0.90}, {25, 0.80}, {22, 0.75}, {2, 0.25},  {3, 0.25},  {4, 0.35},
        {5, 0.30},  {8, 0.40},  {9, 0.40},
    };
    auto it = overrides.find(task);
    return it != overrides.end() ? it->second : 0.55;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic DARWIN-schema dataset generator"};
    std::string out = "synthetic_darwin.csv";
    std::uint64_t seed = 20240901;
    double separation = 0.22;
    int n_patients = 89, n_healthy = 85;
    app.add_option("--out", out, "output CSV path");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--separation", separation, "global class-separation multiplier");
    app.add_option("--patients", n_patients, "number of P rows");
    app.add_option("--healthy", n_healthy, "number of H rows");
    CLI11_PARSE(app, argc, argv);

    const int n = n_patients + n_healthy;
    qks::Rng rng(seed);

    // class sequence, shuffled
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i < n_patients ? +1 : -1;
    for (int i = n; i > 1; --i)
        std::swap(labels[i - 1], labels[rng.uniform_index(static_cast<std::uint64_t>(i))]);

    std::ofstream f(out);
    if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 1;
    }
    f << "ID";
    for (int t = 1; t <= qks::kTaskCount; ++t)
        for (const auto& spec : kFeatures) f << ',' << spec.stem << t;
    f << ",class\n";
    f.precision(10);

    for (int i = 0; i < n; ++i) {
        double cls = labels[i];  // +1 patient, -1 healthy
        // participant severity, correlated with class
        double severity = rng.normal() + 0.9 * cls;
        f << "id_" << (i + 1);
        for (int t = 1; t <= qks::kTaskCount; ++t) {
            double st = task_strength(t);
            double task_state = rng.normal();  // shared within the task block
            for (const auto& spec : kFeatures) {
                double shift = separation * st * spec.effect * (0.5 * cls + 0.45 * severity);
                double latent = 0.35 * task_state + 0.85 * rng.normal() + shift;
                double value = spec.scale * std::exp(spec.cv * latent);
                if (spec.integer) value = std::max(1.0, std::round(value));
                f << ',' << value;
            }
        }
        f << ',' << (labels[i] > 0 ? 'P' : 'H') << '\n';
    }
    std::cout << "wrote " << out << " (" << n << " rows, " << n_patients << " P, " << n_healthy
              << " H)\n";
    return 0;
}
