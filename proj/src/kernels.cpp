#include "qks/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qks/common.hpp"
#include "qks/fidelity.hpp"
#include "qks/rng.hpp"

namespace qks {

std::string kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::RBF: return "rbf";
        case KernelKind::Linear: return "linear";
        case KernelKind::Poly: return "poly";
        case KernelKind::Sigmoid: return "sigmoid";
        case KernelKind::Quantum: return "quantum";
    }
    return "?";
}

KernelKind kernel_from_name(const std::string& s) {
    if (s == "rbf") return KernelKind::RBF;
    if (s == "linear") return KernelKind::Linear;
    if (s == "poly") return KernelKind::Poly;
    if (s == "sigmoid") return KernelKind::Sigmoid;
    if (s == "quantum") return KernelKind::Quantum;
    throw ConfigError("unknown kernel '" + s + "'");
}

void KernelParams::check() const {
    if (kind == KernelKind::Quantum && !circuit)
        throw ConfigError("quantum kernel requires a circuit spec");
    if (kind == KernelKind::Poly && degree < 1)
        throw ConfigError("poly kernel requires degree >= 1");
}

KernelParams resolve_gamma(const KernelParams& p, const FeatureMatrix& data) {
    if (!p.gamma_scale) return p;
    if (data.rows == 0 || data.cols == 0)
        throw ComputeError("cannot resolve gamma='scale' on an empty matrix");
    double mean = 0.0;
    for (double v : data.data) mean += v;
    mean /= static_cast<double>(data.data.size());
    double var = 0.0;
    for (double v : data.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(data.data.size());
    KernelParams out = p;
    out.gamma_scale = false;
    out.gamma = var > 0.0 ? 1.0 / (static_cast<double>(data.cols) * var)
                          : 1.0 / static_cast<double>(data.cols);
    return out;
}

ExecMode ExecMode::with_shots(int n, std::uint64_t seed) {
    ExecMode m;
    m.kind = Kind::Shots;
    m.shots = n;
    m.seed = seed;
    return m;
}

ExecMode ExecMode::noisy(const NoiseModel& nm, std::uint64_t seed) {
    ExecMode m;
    m.kind = Kind::Noisy;
    m.noise = nm;
    m.shots = nm.shots;
    m.seed = seed;
    return m;
}

std::string ExecMode::describe() const {
    switch (kind) {
        case Kind::Exact: return "exact";
        case Kind::Shots: return "shots(" + std::to_string(shots) + ")";
        case Kind::Noisy:
            return "noisy(shots=" + std::to_string(noise.shots) + ",t1=" +
                   std::to_string(noise.t1_us) + "us,t2=" + std::to_string(noise.t2_us) + "us)";
    }
    return "?";
}

namespace {

void check_dims(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ComputeError("kernel inputs have different lengths");
}

double classical_kernel(std::span<const double> x, std::span<const double> y,
                        const KernelParams& p) {
    switch (p.kind) {
        case KernelKind::RBF:
            return std::exp(-p.gamma * squared_distance(x, y));
        case KernelKind::Linear:
            return dot(x, y);
        case KernelKind::Poly:
            return std::pow(p.gamma * dot(x, y) + p.coef0, p.degree);
        case KernelKind::Sigmoid:
            return std::tanh(p.gamma * dot(x, y) + p.coef0);
        default:
            throw ComputeError("not a formula kernel");
    }
}

}  // namespace

double kernel_value(std::span<const double> x, std::span<const double> y,
                    const KernelParams& p) {
    return kernel_value(x, y, p, ExecMode::exact(), 0);
}

double kernel_value(std::span<const double> x, std::span<const double> y,
                    const KernelParams& p, const ExecMode& mode, std::uint64_t pair_seed) {
    check_dims(x, y);
    p.check();
    if (p.kind != KernelKind::Quantum) {
        if (p.gamma_scale && p.kind != KernelKind::Linear)
            throw ComputeError("gamma='scale' must be resolved before kernel evaluation");
        return classical_kernel(x, y, p);
    }
    const CircuitSpec& spec = *p.circuit;
    switch (mode.kind) {
        case ExecMode::Kind::Exact:
            return fidelity_exact(encode(spec, x), encode(spec, y));
        case ExecMode::Kind::Shots:
            return fidelity_shots(spec, x, y, mode.shots, pair_seed);
        case ExecMode::Kind::Noisy: {
            NoiseModel nm = mode.noise;
            nm.rng_seed = pair_seed;
            return fidelity_noisy(spec, x, y, nm);
        }
    }
    throw ComputeError("unreachable kernel mode");
}

GramMatrix GramMatrix::slice(const std::vector<std::size_t>& r_ids,
                             const std::vector<std::size_t>& c_ids) const {
    GramMatrix out;
    out.rows = r_ids.size();
    out.cols = c_ids.size();
    out.params = params;
    out.mode_desc = mode_desc;
    out.row_ids = r_ids;
    out.col_ids = c_ids;
    out.values.resize(out.rows * out.cols);
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j)
            out.values[i * out.cols + j] = at(r_ids[i], c_ids[j]);
    return out;
}

GramMatrix gram(const FeatureMatrix& rows, const FeatureMatrix& cols, const KernelParams& p,
                const ExecMode& mode, int jobs) {
    p.check();
    if (rows.cols != cols.cols) throw ComputeError("gram: row/col feature widths differ");
    const bool symmetric = (&rows == &cols);

    GramMatrix g;
    g.rows = rows.rows;
    g.cols = cols.rows;
    g.params = p;
    g.mode_desc = p.kind == KernelKind::Quantum ? mode.describe() : "exact";
    g.values.assign(g.rows * g.cols, 0.0);
    g.row_ids.resize(g.rows);
    g.col_ids.resize(g.cols);
    for (std::size_t i = 0; i < g.rows; ++i) g.row_ids[i] = i;
    for (std::size_t j = 0; j < g.cols; ++j) g.col_ids[j] = j;

    const bool quantum = p.kind == KernelKind::Quantum;

    if (quantum && mode.kind == ExecMode::Kind::Exact) {
        // Encode every sample once; entries are pairwise overlaps.
        const CircuitSpec& spec = *p.circuit;
        std::vector<StateVector> row_states(rows.rows);
        parallel_for(rows.rows, jobs,
                     [&](std::size_t i) { row_states[i] = encode(spec, rows.row(i)); });
        std::vector<StateVector> col_states_storage;
        const std::vector<StateVector>* col_states = &row_states;
        if (!symmetric) {
            col_states_storage.resize(cols.rows);
            parallel_for(cols.rows, jobs, [&](std::size_t j) {
                col_states_storage[j] = encode(spec, cols.row(j));
            });
            col_states = &col_states_storage;
        }
        parallel_for(g.rows, jobs, [&](std::size_t i) {
            std::size_t j0 = symmetric ? i : 0;
            for (std::size_t j = j0; j < g.cols; ++j)
                g.at(i, j) = fidelity_exact(row_states[i], (*col_states)[j]);
        });
        if (symmetric) {
            for (std::size_t i = 0; i < g.rows; ++i)
                for (std::size_t j = 0; j < i; ++j) g.at(i, j) = g.at(j, i);
        }
        return g;
    }

    // Generic path: per-entry evaluation with deterministic per-pair seeds.
    struct Task {
        std::size_t i, j;
    };
    std::vector<Task> tasks;
    tasks.reserve(g.rows * g.cols);
    for (std::size_t i = 0; i < g.rows; ++i) {
        std::size_t j0 = symmetric ? i : 0;
        for (std::size_t j = j0; j < g.cols; ++j) tasks.push_back({i, j});
    }
    const bool pin_diagonal =
        quantum && symmetric && mode.kind == ExecMode::Kind::Shots;
    parallel_for(tasks.size(), jobs, [&](std::size_t t) {
        auto [i, j] = tasks[t];
        if (pin_diagonal && i == j) {
            g.at(i, j) = 1.0;
            return;
        }
        std::uint64_t pair_seed = derive_seed(mode.seed, i, j);
        g.at(i, j) = kernel_value(rows.row(i), cols.row(j), p, mode, pair_seed);
    });
    if (symmetric) {
        for (std::size_t i = 0; i < g.rows; ++i)
            for (std::size_t j = 0; j < i; ++j) g.at(i, j) = g.at(j, i);
    }
    return g;
}

std::vector<double> spectrum(const GramMatrix& g) {
    if (!g.square()) throw ComputeError("spectrum requires a square Gram matrix");
    const Eigen::Index n = static_cast<Eigen::Index>(g.rows);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

void save_gram(const GramMatrix& g, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw DataError("cannot write " + csv_path);
    out.precision(17);
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) {
            if (j) out << ',';
            out << g.at(i, j);
        }
        out << '\n';
    }
    nlohmann::json side;
    side["kernel"] = kernel_name(g.params.kind);
    side["gamma_scale"] = g.params.gamma_scale;
    side["gamma"] = g.params.gamma;
    side["coef0"] = g.params.coef0;
    side["degree"] = g.params.degree;
    side["mode"] = g.mode_desc;
    side["rows"] = g.rows;
    side["cols"] = g.cols;
    if (g.params.circuit) side["circuit"] = nlohmann::json::parse(g.params.circuit->to_json());
    std::ofstream sj(csv_path + ".json");
    sj << side.dump(2) << '\n';
}

GramMatrix load_gram(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path);
    GramMatrix g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            g.values.push_back(std::stod(cell));
            ++c;
        }
        if (g.rows == 0) g.cols = c;
        else if (c != g.cols) throw DataError("ragged gram csv: " + csv_path);
        ++g.rows;
    }
    std::ifstream sj(csv_path + ".json");
    if (sj) {
        nlohmann::json side = nlohmann::json::parse(sj);
        g.params.kind = kernel_from_name(side.at("kernel").get<std::string>());
        g.params.gamma_scale = side.at("gamma_scale").get<bool>();
        g.params.gamma = side.at("gamma").get<double>();
        g.params.coef0 = side.at("coef0").get<double>();
        g.params.degree = side.at("degree").get<int>();
        g.mode_desc = side.at("mode").get<std::string>();
        if (side.contains("circuit"))
            g.params.circuit = CircuitSpec::from_json(side.at("circuit").dump());
    }
    g.row_ids.resize(g.rows);
    g.col_ids.resize(g.cols);
    for (std::size_t i = 0; i < g.rows; ++i) g.row_ids[i] = i;
    for (std::size_t j = 0; j < g.cols; ++j) g.col_ids[j] = j;
    return g;
}

}  // namespace qks
