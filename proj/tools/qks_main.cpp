#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qks/common.hpp"
#include "qks/dataset.hpp"
#include "qks/rng.hpp"
#include "qks/evaluate.hpp"
#include "qks/kernels.hpp"
#include "qks/preprocess.hpp"
#include "qks/splits.hpp"
#include "qks/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCompute = 3;

struct RunOptions {
    std::string data_path;
    std::string experiment = "main";
    std::string method = "svc";
    std::string mode = "exact";
    std::string out_dir = "qks_out";
    std::string params_from;
    std::string tasks = "all";     // per-task: all | best5 | comma list
    std::string category = "C";    // subsample-category: C | G | M
    std::string qubits_list = "12";
    std::uint64_t seed = 42;
    int shots = 256;
    int n_splits = 20;
    int jobs = 1;
    int runs = 20;
    double bandwidth = -1.0;  // <0: take from modal params or default 0.4
    double t1_us = 50.0, t2_us = 70.0;
    double gate1_ns = 50.0, gate2_ns = 300.0;
    std::size_t components = 24;
    bool pca_per_split = false;
};

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* env = std::getenv("QKS_SEED");
    if (!env) return fallback;
    return std::strtoull(env, nullptr, 10);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw qks::DataError("cannot write " + path.string());
    out << text;
}

// Flat JSON config file mirroring the flags; explicit flags win.
void merge_config_file(const std::string& path, const CLI::App& app, RunOptions& o) {
    std::ifstream in(path);
    if (!in) throw qks::ConfigError("cannot open config file " + path);
    json c = json::parse(in, nullptr, true, true);
    auto unset = [&](const std::string& flag) { return app.count(flag) == 0; };
    if (c.contains("data") && unset("--data")) o.data_path = c["data"].get<std::string>();
    if (c.contains("experiment") && unset("--experiment"))
        o.experiment = c["experiment"].get<std::string>();
    if (c.contains("method") && unset("--method")) o.method = c["method"].get<std::string>();
    if (c.contains("mode") && unset("--mode")) o.mode = c["mode"].get<std::string>();
    if (c.contains("out") && unset("--out")) o.out_dir = c["out"].get<std::string>();
    if (c.contains("seed") && unset("--seed")) o.seed = c["seed"].get<std::uint64_t>();
    if (c.contains("shots") && unset("--shots")) o.shots = c["shots"].get<int>();
    if (c.contains("splits") && unset("--splits")) o.n_splits = c["splits"].get<int>();
    if (c.contains("jobs") && unset("--jobs")) o.jobs = c["jobs"].get<int>();
    if (c.contains("runs") && unset("--runs")) o.runs = c["runs"].get<int>();
    if (c.contains("bandwidth") && unset("--bandwidth"))
        o.bandwidth = c["bandwidth"].get<double>();
    if (c.contains("qubits") && unset("--qubits")) {
        if (c["qubits"].is_array()) {
            std::string joined;
            for (const auto& v : c["qubits"])
                joined += (joined.empty() ? "" : ",") + std::to_string(v.get<int>());
            o.qubits_list = joined;
        } else {
            o.qubits_list = std::to_string(c["qubits"].get<int>());
        }
    }
    if (c.contains("t1_us") && unset("--t1")) o.t1_us = c["t1_us"].get<double>();
    if (c.contains("t2_us") && unset("--t2")) o.t2_us = c["t2_us"].get<double>();
    if (c.contains("components") && unset("--components"))
        o.components = c["components"].get<std::size_t>();
    if (c.contains("pca_per_split") && unset("--pca-per-split"))
        o.pca_per_split = c["pca_per_split"].get<bool>();
    if (c.contains("tasks") && unset("--tasks")) o.tasks = c["tasks"].get<std::string>();
    if (c.contains("category") && unset("--category"))
        o.category = c["category"].get<std::string>();
    if (c.contains("params_from") && unset("--params-from"))
        o.params_from = c["params_from"].get<std::string>();
}

json resolved_config(const RunOptions& o) {
    json c;
    c["data"] = o.data_path;
    c["experiment"] = o.experiment;
    c["method"] = o.method;
    c["mode"] = o.mode;
    c["seed"] = o.seed;
    c["shots"] = o.shots;
    c["splits"] = o.n_splits;
    c["jobs"] = o.jobs;
    c["runs"] = o.runs;
    c["bandwidth"] = o.bandwidth;
    c["qubits"] = o.qubits_list;
    c["t1_us"] = o.t1_us;
    c["t2_us"] = o.t2_us;
    c["gate_time_1q_ns"] = o.gate1_ns;
    c["gate_time_2q_ns"] = o.gate2_ns;
    c["components"] = o.components;
    c["pca_per_split"] = o.pca_per_split;
    c["tasks"] = o.tasks;
    c["category"] = o.category;
    c["params_from"] = o.params_from;
    return c;
}

qks::ExecMode make_mode(const RunOptions& o) {
    if (o.mode == "exact") return qks::ExecMode::exact();
    if (o.mode == "shots")
        return qks::ExecMode::with_shots(o.shots, qks::derive_seed(o.seed, 0x5807));
    if (o.mode == "noisy") {
        qks::NoiseModel nm;
        nm.t1_us = o.t1_us;
        nm.t2_us = o.t2_us;
        nm.gate_time_1q_ns = o.gate1_ns;
        nm.gate_time_2q_ns = o.gate2_ns;
        nm.shots = o.shots;
        return qks::ExecMode::noisy(nm, qks::derive_seed(o.seed, 0x4015));
    }
    throw qks::ConfigError("unknown mode '" + o.mode + "' (exact|shots|noisy)");
}

qks::ParamPoint fixed_params(const RunOptions& o, qks::Method method) {
    if (!o.params_from.empty()) {
        std::ifstream in(o.params_from);
        if (!in) throw qks::ConfigError("cannot open report " + o.params_from);
        auto report = qks::ExperimentReport::from_json(json::parse(in));
        qks::ParamPoint p = qks::modal_params(report);
        if (method == qks::Method::QSVC && o.bandwidth > 0)
            std::get<qks::QsvcPoint>(p).bandwidth = o.bandwidth;
        return p;
    }
    if (method == qks::Method::QSVC) {
        return qks::QsvcPoint{o.bandwidth > 0 ? o.bandwidth : 0.4};
    }
    if (method == qks::Method::SVC) {
        return qks::SvcPoint{};  // rbf, C=1, gamma=scale, tol=1e-3
    }
    if (method == qks::Method::KNN) return qks::KnnPoint{};
    return qks::DtPoint{};
}

int cmd_validate(const std::string& data_path) {
    qks::SchemaReport rep = qks::validate_darwin(data_path);
    std::cout << rep.summary() << "\n";
    if (!rep.ok()) {
        for (const auto& e : rep.errors) std::cout << "  error: " << e << "\n";
        return kExitData;
    }
    return kExitOk;
}

int cmd_preprocess(const RunOptions& o) {
    qks::FeatureMatrix raw = qks::load_darwin(o.data_path);
    auto [data, pipe] = qks::preprocess(raw, o.components);
    fs::create_directories(o.out_dir);

    std::ofstream csv(fs::path(o.out_dir) / "preprocessed.csv");
    csv.precision(17);
    for (std::size_t c = 0; c < data.cols; ++c) csv << (c ? "," : "") << data.column_names[c];
    csv << ",label\n";
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t c = 0; c < data.cols; ++c) csv << (c ? "," : "") << data.at(r, c);
        csv << ',' << data.labels[r] << '\n';
    }

    json side;
    side["seed"] = o.seed;
    side["components"] = o.components;
    side["rows"] = data.rows;
    side["scaler_raw"] = {{"mean", pipe.scaler_raw.mean}, {"std", pipe.scaler_raw.std}};
    side["scaler_projected"] = {{"mean", pipe.scaler_projected.mean},
                                {"std", pipe.scaler_projected.std}};
    side["pca_explained_variance"] = pipe.pca.explained_variance;
    write_text(fs::path(o.out_dir) / "preprocessed.json", side.dump(2) + "\n");
    std::cout << "wrote " << o.out_dir << "/preprocessed.csv (" << data.rows << "x" << data.cols
              << ")\n";
    return kExitOk;
}

int cmd_spectrum(const RunOptions& o) {
    qks::FeatureMatrix raw = qks::load_darwin(o.data_path);
    auto [data, pipe] = qks::preprocess(raw, o.components);
    fs::create_directories(o.out_dir);
    double bandwidth = o.bandwidth > 0 ? o.bandwidth : 0.4;

    qks::SvgPlot plot;
    plot.title = "Gram matrix eigenvalue curves";
    plot.x_label = "eigenvalue index";
    plot.y_label = "eigenvalue";
    plot.log_y = true;
    json summary;
    summary["bandwidth"] = bandwidth;

    for (int q : parse_int_list(o.qubits_list)) {
        qks::KernelParams kp;
        kp.kind = qks::KernelKind::Quantum;
        kp.circuit = qks::build_ansatz(q, static_cast<int>(data.cols), bandwidth);
        qks::GramMatrix g = qks::gram(data, data, kp, make_mode(o), o.jobs);
        auto ev = qks::spectrum(g);

        std::string name = "spectrum_" + std::to_string(q) + "q";
        std::ofstream csv(fs::path(o.out_dir) / (name + ".csv"));
        csv.precision(17);
        csv << "index,eigenvalue\n";
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < ev.size(); ++i) {
            csv << (i + 1) << ',' << ev[i] << '\n';
            xs.push_back(static_cast<double>(i + 1));
            ys.push_back(ev[i]);
        }
        plot.add_series(std::to_string(q) + " qubits", xs, ys);

        json stats;
        stats["n_qubits"] = q;
        stats["min_eigenvalue"] = ev.back();
        stats["psd"] = qks::spectrum_psd(ev);
        stats["lambda1"] = ev.front();
        if (ev.size() >= 100) {
            stats["lambda100"] = ev[99];
            stats["decay_ratio_1_100"] = ev.front() / std::max(ev[99], 1e-300);
        }
        summary["curves"].push_back(stats);
    }
    plot.write((fs::path(o.out_dir) / "spectrum.svg").string());
    write_text(fs::path(o.out_dir) / "spectrum.json", summary.dump(2) + "\n");
    write_text(fs::path(o.out_dir) / "config.json", resolved_config(o).dump(2) + "\n");
    std::cout << "wrote " << o.out_dir << "/spectrum.svg\n";
    return kExitOk;
}

int cmd_run(const RunOptions& o) {
    qks::FeatureMatrix raw = qks::load_darwin(o.data_path);
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / "config.json", resolved_config(o).dump(2) + "\n");

    qks::Method method = qks::method_from_name(o.method);
    qks::CvConfig cfg;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.mode = make_mode(o);
    cfg.pca_per_split = o.pca_per_split;
    cfg.pca_components = o.components;

    auto write_report = [&](const qks::ExperimentReport& report) {
        write_text(fs::path(o.out_dir) / "report.json", report.to_json().dump(2) + "\n");
        report.write_csv((fs::path(o.out_dir) / "report.csv").string());
        std::cout << o.experiment << " " << o.method << ": mean " << report.mean_acc_pct
                  << "% +/- " << report.std_acc_pct << "%\n";
        std::cout << "wrote " << o.out_dir << "/report.json\n";
    };

    if (o.experiment == "main") {
        qks::GridSpec grid = qks::default_grid(method);
        if (method == qks::Method::QSVC) {
            auto ids = parse_int_list(o.qubits_list);
            if (ids.size() != 1)
                throw qks::ConfigError("main qsvc run expects a single --qubits value");
            cfg.qsvc_qubits = ids.front();
            if (o.bandwidth > 0) grid = qks::GridSpec::single(qks::QsvcPoint{o.bandwidth});
        }
        qks::SplitPlan plan = qks::make_splits(raw.rows, 0.6, 0.2, 0.2, o.n_splits, o.seed);
        if (cfg.pca_per_split) {
            write_report(qks::run_grid_cv(raw, grid, plan, cfg));
        } else {
            auto [data, pipe] = qks::preprocess(raw, o.components);
            write_report(qks::run_grid_cv(data, grid, plan, cfg));
        }
        return kExitOk;
    }

    if (o.experiment == "subsample-category") {
        if (o.category.size() != 1)
            throw qks::ConfigError("--category must be one of C, G, M");
        const auto& task_set = qks::tasks_for_category(o.category[0]);
        std::vector<int> tasks(task_set.begin(), task_set.end());
        if (method == qks::Method::QSVC) cfg.qsvc_qubits = parse_int_list(o.qubits_list).front();
        qks::ParamPoint point = fixed_params(o, method);
        qks::SplitPlan plan = qks::make_splits(raw.rows, 0.8, 0.0, 0.2, o.n_splits, o.seed);
        write_report(qks::fixed_point_cv(raw, tasks, point, plan, cfg));
        return kExitOk;
    }

    if (o.experiment == "per-task") {
        std::vector<int> tasks;
        if (o.tasks == "all") tasks = qks::all_task_ids();
        else if (o.tasks == "best5")
            tasks = method == qks::Method::QSVC ? qks::best5_tasks_quantum()
                                                : qks::best5_tasks_classical();
        else tasks = parse_int_list(o.tasks);
        cfg.qsvc_qubits = 9;  // 18 features per task
        qks::ParamPoint point = fixed_params(o, method);
        qks::SplitPlan plan = qks::make_splits(raw.rows, 0.8, 0.0, 0.2, o.n_splits, o.seed);
        write_report(qks::per_task_ensemble(raw, point, plan, tasks, cfg));
        return kExitOk;
    }

    if (o.experiment == "noise") {
        auto [data, pipe] = qks::preprocess(raw, o.components);
        qks::NoiseModel nm;
        nm.t1_us = o.t1_us;
        nm.t2_us = o.t2_us;
        nm.gate_time_1q_ns = o.gate1_ns;
        nm.gate_time_2q_ns = o.gate2_ns;
        nm.shots = o.shots;
        double bandwidth = o.bandwidth > 0 ? o.bandwidth : 0.4;
        auto report = qks::noise_study(data, parse_int_list(o.qubits_list), bandwidth, nm,
                                       o.runs, cfg);
        write_text(fs::path(o.out_dir) / "noise_report.json", report.to_json().dump(2) + "\n");
        for (const auto& c : report.circuits) {
            std::cout << c.n_qubits << "q: baseline " << 100 * c.baseline_accuracy
                      << "%, majority over " << c.runs.size() << " noisy runs "
                      << 100 * c.majority_accuracy << "% (median run "
                      << 100 * c.median_run_accuracy << "%)\n";
        }
        std::cout << "wrote " << o.out_dir << "/noise_report.json\n";
        return kExitOk;
    }

    throw qks::ConfigError("unknown experiment '" + o.experiment +
                           "' (main|subsample-category|per-task|noise)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-kernel screening experiments"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a dataset file against the schema");
    validate->add_option("--data", validate_path, "dataset CSV")->required();

    RunOptions pre_o;
    auto* pre = app.add_subcommand("preprocess", "standardize + PCA + standardize, write CSV");
    pre->add_option("--data", pre_o.data_path, "dataset CSV")->required();
    pre->add_option("--components", pre_o.components, "PCA components");
    pre->add_option("--out", pre_o.out_dir, "output directory");
    pre->add_option("--seed", pre_o.seed, "seed recorded in the sidecar");

    RunOptions run_o;
    std::string run_config;
    auto* run = app.add_subcommand("run", "run an experiment");
    run->add_option("--data", run_o.data_path, "dataset CSV");
    run->add_option("--experiment", run_o.experiment,
                    "main | subsample-category | per-task | noise");
    run->add_option("--method", run_o.method, "svc | knn | dt | qsvc");
    run->add_option("--mode", run_o.mode, "exact | shots | noisy");
    run->add_option("--qubits", run_o.qubits_list, "qubit count(s), comma separated");
    run->add_option("--bandwidth", run_o.bandwidth, "fixed bandwidth (qsvc)");
    run->add_option("--shots", run_o.shots, "shots per kernel entry");
    run->add_option("--splits", run_o.n_splits, "number of shuffle splits");
    run->add_option("--seed", run_o.seed, "experiment seed");
    run->add_option("--jobs", run_o.jobs, "worker threads");
    run->add_option("--runs", run_o.runs, "noisy executions (noise study)");
    run->add_option("--t1", run_o.t1_us, "T1 in microseconds");
    run->add_option("--t2", run_o.t2_us, "T2 in microseconds");
    run->add_option("--gate1", run_o.gate1_ns, "1-qubit gate time (ns)");
    run->add_option("--gate2", run_o.gate2_ns, "2-qubit gate time (ns)");
    run->add_option("--components", run_o.components, "PCA components");
    run->add_option("--tasks", run_o.tasks, "per-task: all | best5 | id list");
    run->add_option("--category", run_o.category, "subsample category: C | G | M");
    run->add_option("--params-from", run_o.params_from, "report.json for modal params");
    run->add_option("--out", run_o.out_dir, "output directory");
    run->add_flag("--pca-per-split", run_o.pca_per_split, "refit preprocessing per split");
    run->add_option("--config", run_config, "flat JSON config (flags override)");

    RunOptions spec_o;
    auto* spec = app.add_subcommand("spectrum", "eigenvalue curves of quantum Grams");
    spec->add_option("--data", spec_o.data_path, "dataset CSV")->required();
    spec->add_option("--qubits", spec_o.qubits_list, "qubit counts, comma separated");
    spec->add_option("--bandwidth", spec_o.bandwidth, "bandwidth");
    spec->add_option("--components", spec_o.components, "PCA components");
    spec->add_option("--jobs", spec_o.jobs, "worker threads");
    spec->add_option("--out", spec_o.out_dir, "output directory");
    spec->add_option("--seed", spec_o.seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_path);
        if (pre->parsed()) {
            pre_o.seed = pre->count("--seed") ? pre_o.seed : seed_from_env(pre_o.seed);
            return cmd_preprocess(pre_o);
        }
        if (run->parsed()) {
            if (!run_config.empty()) merge_config_file(run_config, *run, run_o);
            if (run_o.data_path.empty())
                throw qks::ConfigError("missing --data (flag or config file)");
            if (run->count("--seed") == 0) run_o.seed = seed_from_env(run_o.seed);
            return cmd_run(run_o);
        }
        if (spec->parsed()) {
            if (spec->count("--seed") == 0) spec_o.seed = seed_from_env(spec_o.seed);
            return cmd_spectrum(spec_o);
        }
    } catch (const qks::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qks::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitUsage;
}
