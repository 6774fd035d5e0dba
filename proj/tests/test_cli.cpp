#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::string g_data;
int g_counter = 0;

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    fs::path tmp = fs::temp_directory_path();
    fs::path out = tmp / ("qks_cli_out_" + std::to_string(g_counter));
    fs::path err = tmp / ("qks_cli_err_" + std::to_string(g_counter));
    ++g_counter;
    std::string cmd = g_cli + " " + args + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("qks_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("validate reports the canonical counts for the bundled dataset") {
    auto r = run_cli("validate --data " + g_data);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("174 rows, 89 P, 85 H, 450 features: OK") != std::string::npos);
}

TEST_CASE("validate fails loudly on a broken file") {
    fs::path bad = fs::temp_directory_path() / "qks_bad.csv";
    std::ofstream(bad) << "ID,air_time1,class\nid_1,nope,P\n";
    auto r = run_cli("validate --data " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("error") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("run on a missing dataset exits with the data code and names the path") {
    auto r = run_cli("run --experiment main --method knn --data /no/such/file.csv --out " +
                     fresh_dir("missing").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("unknown experiment is a usage error") {
    auto r = run_cli("run --experiment warp --method svc --data " + g_data + " --out " +
                     fresh_dir("warp").string());
    CHECK(r.exit_code == 1);
}

TEST_CASE("preprocess writes the matrix and its sidecar") {
    fs::path dir = fresh_dir("pre");
    auto r = run_cli("preprocess --data " + g_data + " --components 24 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "preprocessed.csv"));
    CHECK(fs::exists(dir / "preprocessed.json"));
    std::string side = slurp(dir / "preprocessed.json");
    CHECK(side.find("\"components\": 24") != std::string::npos);
    CHECK(side.find("scaler_raw") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("main experiment produces a report and a resolved config") {
    fs::path dir = fresh_dir("main");
    auto r = run_cli("run --experiment main --method qsvc --qubits 6 --bandwidth 0.4 --data " +
                     g_data + " --seed 7 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "config.json"));
    CHECK(r.out.find("mean") != std::string::npos);

    // identical config + seed -> byte-identical report
    fs::path dir2 = fresh_dir("main2");
    run_cli("run --experiment main --method qsvc --qubits 6 --bandwidth 0.4 --data " + g_data +
            " --seed 7 --out " + dir2.string());
    CHECK(slurp(dir / "report.json") == slurp(dir2 / "report.json"));
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("config file drives a run and flags override it") {
    fs::path dir = fresh_dir("cfg");
    fs::path cfg = dir / "exp.json";
    std::ofstream(cfg) << R"({"data": ")" << g_data
                       << R"(", "experiment": "main", "method": "knn", "seed": 11})";
    auto r = run_cli("run --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("main knn") != std::string::npos);

    // flag overrides the config's method
    auto r2 = run_cli("run --config " + cfg.string() + " --method dt --out " + dir.string());
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("main dt") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("spectrum emits per-size csv, a combined svg and decay stats") {
    fs::path dir = fresh_dir("spec");
    auto r = run_cli("spectrum --data " + g_data + " --qubits 6,8,12 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "spectrum_6q.csv"));
    CHECK(fs::exists(dir / "spectrum_8q.csv"));
    CHECK(fs::exists(dir / "spectrum_12q.csv"));
    std::string svg = slurp(dir / "spectrum.svg");
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 3);
    std::string summary = slurp(dir / "spectrum.json");
    CHECK(summary.find("decay_ratio_1_100") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("QKS_SEED env var is the seed fallback") {
    fs::path a = fresh_dir("env_a"), b = fresh_dir("env_b"), c = fresh_dir("env_c");
    std::string base = "run --experiment main --method knn --data " + g_data + " --out ";
    ::setenv("QKS_SEED", "123", 1);
    run_cli(base + a.string());
    run_cli(base + b.string());
    ::setenv("QKS_SEED", "124", 1);
    run_cli(base + c.string());
    ::unsetenv("QKS_SEED");
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "report.json") != slurp(c / "report.json"));
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <qks-binary> <dataset-csv> [doctest args]\n");
        return 2;
    }
    g_cli = argv[1];
    g_data = argv[2];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 2, argv + 2);
    return ctx.run();
}
