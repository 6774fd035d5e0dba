#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qks/ansatz.hpp"
#include "qks/common.hpp"
#include "qks/density.hpp"
#include "qks/fidelity.hpp"
#include "qks/noise.hpp"
#include "qks/rng.hpp"
#include "qks/statevector.hpp"

using namespace qks;

namespace {

StateVector random_state(int n_qubits, std::uint64_t seed) {
    Rng rng(seed);
    StateVector sv;
    sv.n_qubits = n_qubits;
    sv.amplitudes.resize(std::size_t{1} << n_qubits);
    double norm = 0;
    for (auto& a : sv.amplitudes) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (auto& a : sv.amplitudes) a /= std::sqrt(norm);
    return sv;
}

std::vector<double> random_features(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("gate matrices are unitary to 1e-12") {
    for (double angle : {0.0, 0.3, 1.1, 3.14159, -2.2}) {
        for (GateKind kind : {GateKind::RX, GateKind::RY}) {
            qks::test::Mat u = qks::test::dense_gate(1, Gate{kind, 0, -1, angle});
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    cdouble s{0, 0};
                    for (int k = 0; k < 2; ++k) s += std::conj(u[k][i]) * u[k][j];
                    CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
                }
        }
    }
    for (GateKind kind : {GateKind::CX, GateKind::CZ}) {
        qks::test::Mat u = qks::test::dense_gate(2, Gate{kind, 0, 1, 0});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cdouble s{0, 0};
                for (int k = 0; k < 4; ++k) s += std::conj(u[k][i]) * u[k][j];
                CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("apply_gate basics") {
    SUBCASE("RX(0) leaves any state unchanged") {
        StateVector sv = random_state(3, 4);
        StateVector copy = sv;
        apply_gate(sv, Gate{GateKind::RX, 1, -1, 0.0});
        for (std::size_t i = 0; i < sv.amplitudes.size(); ++i)
            CHECK(std::abs(sv.amplitudes[i] - copy.amplitudes[i]) <= 1e-15);
    }
    SUBCASE("CZ flips the sign of |11> only") {
        StateVector sv = StateVector::zero_state(2);
        sv.amplitudes = {{0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}};
        apply_gate(sv, Gate{GateKind::CZ, 0, 1, 0.0});
        CHECK(sv.amplitudes[0].real() == doctest::Approx(0.5));
        CHECK(sv.amplitudes[1].real() == doctest::Approx(0.5));
        CHECK(sv.amplitudes[2].real() == doctest::Approx(0.5));
        CHECK(sv.amplitudes[3].real() == doctest::Approx(-0.5));
    }
    SUBCASE("RX(pi)|0> = -i|1>") {
        StateVector sv = StateVector::zero_state(1);
        apply_gate(sv, Gate{GateKind::RX, 0, -1, 3.14159265358979323846});
        CHECK(std::abs(sv.amplitudes[0]) <= 1e-12);
        CHECK(std::abs(sv.amplitudes[1] - cdouble{0, -1}) <= 1e-12);
    }
    SUBCASE("out-of-range qubit throws") {
        StateVector sv = StateVector::zero_state(2);
        CHECK_THROWS_AS(apply_gate(sv, Gate{GateKind::RX, 5, -1, 0.1}), ComputeError);
    }
}

TEST_CASE("apply_gate agrees with the dense oracle on 1-3 qubits") {
    Rng rng(2024);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            StateVector sv = random_state(n, 100 + trial + 10 * n);
            Gate g;
            int pick = static_cast<int>(rng.uniform_index(n >= 2 ? 4 : 2));
            g.kind = static_cast<GateKind>(pick);
            g.angle = rng.normal() * 2.0;
            g.q0 = static_cast<int>(rng.uniform_index(n));
            if (!is_rotation(g.kind)) {
                do {
                    g.q1 = static_cast<int>(rng.uniform_index(n));
                } while (g.q1 == g.q0);
            }
            auto expected = qks::test::dense_apply(qks::test::dense_gate(n, g), sv.amplitudes);
            apply_gate(sv, g);
            for (std::size_t i = 0; i < expected.size(); ++i)
                CHECK(std::abs(sv.amplitudes[i] - expected[i]) <= 1e-12);
        }
    }
}

TEST_CASE("build_ansatz produces the documented layer structure") {
    SUBCASE("6 qubits, 24 parameters: RX CZ RY CX RX CZ RY") {
        CircuitSpec spec = build_ansatz(6, 24, 0.4);
        CHECK(spec.layout.size() == 24 + 3 * 5);
        std::vector<GateKind> expected;
        for (int l = 0; l < 4; ++l) {
            GateKind rot = l % 2 == 0 ? GateKind::RX : GateKind::RY;
            for (int q = 0; q < 6; ++q) expected.push_back(rot);
            if (l < 3) {
                GateKind ent = l % 2 == 0 ? GateKind::CZ : GateKind::CX;
                for (int q = 0; q < 5; ++q) expected.push_back(ent);
            }
        }
        REQUIRE(spec.layout.size() == expected.size());
        int slot = 0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(spec.layout[i].kind == expected[i]);
            if (is_rotation(spec.layout[i].kind)) CHECK(spec.layout[i].param_slot == slot++);
        }
        CHECK(slot == 24);
    }
    SUBCASE("12 qubits, 24 parameters: two rotation layers, one CZ layer") {
        CircuitSpec spec = build_ansatz(12, 24, 0.4);
        int rx = 0, ry = 0, cz = 0, cx = 0;
        for (const auto& s : spec.layout) {
            if (s.kind == GateKind::RX) ++rx;
            if (s.kind == GateKind::RY) ++ry;
            if (s.kind == GateKind::CZ) ++cz;
            if (s.kind == GateKind::CX) ++cx;
        }
        CHECK(rx == 12);
        CHECK(ry == 12);
        CHECK(cz == 11);
        CHECK(cx == 0);
    }
    SUBCASE("9 qubits, 18 parameters: two rotation layers, one CZ layer") {
        CircuitSpec spec = build_ansatz(9, 18, 0.4);
        int rot_layers = 0, ent = 0;
        for (const auto& s : spec.layout)
            if (!is_rotation(s.kind)) ++ent;
        rot_layers = spec.n_params / spec.n_qubits;
        CHECK(rot_layers == 2);
        CHECK(ent == 8);
    }
    SUBCASE("non-divisible parameter count is rejected") {
        CHECK_THROWS_AS(build_ansatz(6, 25, 0.4), ConfigError);
    }
}

TEST_CASE("encode on all-zero input returns |0...0>") {
    CircuitSpec spec = build_ansatz(4, 16, 0.4);
    std::vector<double> x(16, 0.0);
    StateVector sv = encode(spec, x);
    CHECK(std::abs(sv.amplitudes[0] - cdouble{1, 0}) <= 1e-12);
}

TEST_CASE("encode preserves norm on random inputs") {
    CircuitSpec spec = build_ansatz(5, 20, 0.7);
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_features(20, 5000 + trial);
        StateVector sv = encode(spec, x);
        CHECK(std::abs(sv.norm_squared() - 1.0) <= 1e-10);
    }
}

TEST_CASE("encode matches a hand-multiplied dense chain on 2 qubits") {
    const double b = 0.4;
    CircuitSpec spec = build_ansatz(2, 4, b);
    // layout: RX(q0, s0) RX(q1, s1) CZ(0,1) RY(q0, s2) RY(q1, s3)
    auto x = random_features(4, 321);
    std::vector<cdouble> v = {{1, 0}, {0, 0}, {0, 0}, {0, 0}};
    v = qks::test::dense_apply(qks::test::dense_gate(2, Gate{GateKind::RX, 0, -1, b * x[0]}), v);
    v = qks::test::dense_apply(qks::test::dense_gate(2, Gate{GateKind::RX, 1, -1, b * x[1]}), v);
    v = qks::test::dense_apply(qks::test::dense_gate(2, Gate{GateKind::CZ, 0, 1, 0}), v);
    v = qks::test::dense_apply(qks::test::dense_gate(2, Gate{GateKind::RY, 0, -1, b * x[2]}), v);
    v = qks::test::dense_apply(qks::test::dense_gate(2, Gate{GateKind::RY, 1, -1, b * x[3]}), v);
    StateVector sv = encode(spec, x);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(sv.amplitudes[i] - v[i]) <= 1e-12);

    // single rotation slot at pi/2 over bandwidth
    CircuitSpec tiny = build_ansatz(2, 2, b);
    std::vector<double> xt = {3.14159265358979323846 / 2.0 / b, 0.0};
    StateVector t = encode(tiny, xt);
    CHECK(std::abs(t.amplitudes[0] - cdouble{std::cos(3.14159265358979323846 / 4), 0}) <= 1e-12);
    CHECK(std::abs(t.amplitudes[1] - cdouble{0, -std::sin(3.14159265358979323846 / 4)}) <= 1e-12);
    CHECK(std::abs(t.amplitudes[2]) <= 1e-15);
    CHECK(std::abs(t.amplitudes[3]) <= 1e-15);
}

TEST_CASE("circuit spec json round-trip") {
    CircuitSpec spec = build_ansatz(6, 24, 0.4);
    CircuitSpec back = CircuitSpec::from_json(spec.to_json());
    CHECK(back.n_qubits == spec.n_qubits);
    CHECK(back.n_params == spec.n_params);
    CHECK(back.bandwidth == spec.bandwidth);
    REQUIRE(back.layout.size() == spec.layout.size());
    for (std::size_t i = 0; i < spec.layout.size(); ++i) {
        CHECK(back.layout[i].kind == spec.layout[i].kind);
        CHECK(back.layout[i].q0 == spec.layout[i].q0);
        CHECK(back.layout[i].q1 == spec.layout[i].q1);
        CHECK(back.layout[i].param_slot == spec.layout[i].param_slot);
    }
}

TEST_CASE("fidelity_exact basics and oracle") {
    StateVector a = random_state(4, 11);
    CHECK(fidelity_exact(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    StateVector zero = StateVector::zero_state(1);
    StateVector one = StateVector::zero_state(1);
    one.amplitudes = {{0, 0}, {1, 0}};
    CHECK(fidelity_exact(zero, one) == doctest::Approx(0.0));

    StateVector b = random_state(4, 12);
    cdouble inner{0, 0};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        inner += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    CHECK(fidelity_exact(a, b) == doctest::Approx(std::norm(inner)).epsilon(1e-12));
    CHECK(fidelity_exact(b, a) == doctest::Approx(fidelity_exact(a, b)).epsilon(1e-12));

    // invariant under a global phase on either argument
    StateVector c = b;
    cdouble phase = std::polar(1.0, 1.234);
    for (auto& amp : c.amplitudes) amp *= phase;
    CHECK(fidelity_exact(a, c) == doctest::Approx(fidelity_exact(a, b)).epsilon(1e-12));

    StateVector wide = random_state(3, 13);
    CHECK_THROWS_AS(fidelity_exact(a, wide), ComputeError);
}

TEST_CASE("fidelity_mixed matches closed forms and the pure-state formula") {
    StateVector zero = StateVector::zero_state(1);
    StateVector one = StateVector::zero_state(1);
    one.amplitudes = {{0, 0}, {1, 0}};

    DensityMatrix rho0 = density_from_state(zero);
    DensityMatrix rho1 = density_from_state(one);
    CHECK(fidelity_mixed(rho0, rho0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fidelity_mixed(rho0, rho1) == doctest::Approx(0.0).epsilon(1e-10));

    DensityMatrix mixed = DensityMatrix::Identity(2, 2) * 0.5;
    CHECK(fidelity_mixed(mixed, rho0) == doctest::Approx(0.5).epsilon(1e-10));

    for (int trial = 0; trial < 10; ++trial) {
        StateVector a = random_state(3, 700 + trial);
        StateVector b = random_state(3, 800 + trial);
        double pure = fidelity_exact(a, b);
        double mixed_f = fidelity_mixed(density_from_state(a), density_from_state(b));
        CHECK(mixed_f == doctest::Approx(pure).epsilon(1e-8));
    }

    DensityMatrix bad = DensityMatrix::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(fidelity_mixed(bad, rho0), ComputeError);
    DensityMatrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(fidelity_mixed(neg, rho0), ComputeError);
}

TEST_CASE("inversion-test probability equals fidelity_exact on random pairs") {
    int checked = 0;
    for (int n = 2; n <= 6; ++n) {
        CircuitSpec spec = build_ansatz(n, 2 * n, 0.6);
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_features(2 * n, 900 + 31 * n + trial);
            auto y = random_features(2 * n, 1900 + 17 * n + trial);
            double p = inversion_test_probability(spec, x, y);
            double f = fidelity_exact(encode(spec, x), encode(spec, y));
            CHECK(std::abs(p - f) <= 1e-10);
            ++checked;
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("fidelity_shots is exact for identical inputs and deterministic") {
    CircuitSpec spec = build_ansatz(3, 6, 0.4);
    auto x = random_features(6, 42);
    CHECK(fidelity_shots(spec, x, x, 64, 7) == doctest::Approx(1.0));
    double a = fidelity_shots(spec, x, random_features(6, 43), 256, 99);
    double b = fidelity_shots(spec, x, random_features(6, 43), 256, 99);
    CHECK(a == b);
}

TEST_CASE("fidelity_shots concentrates at the binomial rate") {
    CircuitSpec spec = build_ansatz(3, 6, 0.5);
    auto x = random_features(6, 52);
    auto y = random_features(6, 53);
    double p = inversion_test_probability(spec, x, y);
    REQUIRE(p > 0.05);
    REQUIRE(p < 0.95);
    double band = 3.0 * std::sqrt(p * (1 - p) / 256.0);
    int inside = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        double est = fidelity_shots(spec, x, y, 256, 10'000 + t);
        if (std::abs(est - p) <= band) ++inside;
    }
    CHECK(inside >= 990);
}

TEST_CASE("fidelity_shots converges in the large-shot limit") {
    CircuitSpec spec = build_ansatz(4, 8, 0.5);
    auto x = random_features(8, 61);
    auto y = random_features(8, 62);
    double exact = fidelity_exact(encode(spec, x), encode(spec, y));
    double est = fidelity_shots(spec, x, y, 1'000'000, 5);
    CHECK(std::abs(est - exact) <= 5e-3);
}

TEST_CASE("noise model validation") {
    NoiseModel nm;
    nm.t1_us = 50;
    nm.t2_us = 120;  // > 2*T1
    CHECK_THROWS_AS(nm.validate(), ConfigError);
    nm.t2_us = 100;  // == 2*T1 is allowed, dephasing rate 0
    nm.validate();
    CHECK(nm.z_prob_for(GateKind::RX) == 0.0);
    nm.t2_us = 70;
    nm.shots = 0;
    CHECK_THROWS_AS(nm.validate(), ConfigError);
}

TEST_CASE("noiseless limit of the trajectory sampler matches shot sampling") {
    CircuitSpec spec = build_ansatz(3, 6, 0.5);
    auto x = random_features(6, 71);
    auto y = random_features(6, 72);
    double p = inversion_test_probability(spec, x, y);

    NoiseModel nm;
    nm.t1_us = 1e12;
    nm.t2_us = 1e12;
    nm.shots = 256;
    double mean = 0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
        nm.rng_seed = 3000 + r;
        mean += fidelity_noisy(spec, x, y, nm);
    }
    mean /= reps;
    double se = std::sqrt(p * (1 - p) / (256.0 * reps));
    CHECK(std::abs(mean - p) <= 5 * se);
}

TEST_CASE("strong damping pulls the self-fidelity below one") {
    CircuitSpec spec = build_ansatz(3, 6, 0.8);
    auto x = random_features(6, 81);
    NoiseModel nm;
    nm.t1_us = 0.05;  // T1 equal to the 1q gate time
    nm.t2_us = 0.05;
    nm.shots = 256;
    nm.rng_seed = 1;
    double est = fidelity_noisy(spec, x, x, nm);
    CHECK(est < 1.0);
    CHECK(est >= 0.0);
}

TEST_CASE("trajectory sampler agrees with exact channel evolution") {
    // strong noise exercises multi-jump paths and the checkpoint replay
    struct Case {
        int qubits;
        double t1, t2;
        std::uint64_t seed;
    };
    for (const Case& c : {Case{2, 0.4, 0.5, 11}, Case{3, 1.0, 1.2, 12}, Case{2, 0.1, 0.15, 13}}) {
        CircuitSpec spec = build_ansatz(c.qubits, 2 * c.qubits, 0.9);
        auto x = random_features(2 * c.qubits, 400 + c.seed);
        auto y = random_features(2 * c.qubits, 500 + c.seed);
        NoiseModel nm;
        nm.t1_us = c.t1;
        nm.t2_us = c.t2;

        auto gates = bind_inversion_gates(spec, x, y);
        auto ops = expand_noisy_ops(gates, nm);
        double exact_p0 = all_zeros_probability(evolve_density(c.qubits, ops));

        const int shots = 40'000;
        double frac = run_noisy_trajectories(c.qubits, ops, shots, c.seed);
        double se = std::sqrt(exact_p0 * (1 - exact_p0) / shots);
        CHECK(std::abs(frac - exact_p0) <= 5 * se + 1e-4);
    }
}

TEST_CASE("trajectory sampler is deterministic given a seed") {
    CircuitSpec spec = build_ansatz(2, 4, 0.4);
    auto x = random_features(4, 1);
    auto y = random_features(4, 2);
    NoiseModel nm;
    nm.shots = 128;
    nm.rng_seed = 5;
    CHECK(fidelity_noisy(spec, x, y, nm) == fidelity_noisy(spec, x, y, nm));
}
