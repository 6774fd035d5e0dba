#include "qks/noise.hpp"

#include <algorithm>
#include <cmath>

#include "qks/common.hpp"
#include "qks/rng.hpp"

namespace qks {

void NoiseModel::validate() const {
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw ConfigError("T1 and T2 must be positive");
    if (t2_us > 2.0 * t1_us + 1e-12)
        throw ConfigError("T2 must not exceed 2*T1 (got T1=" + std::to_string(t1_us) +
                          "us, T2=" + std::to_string(t2_us) + "us)");
    if (!(gate_time_1q_ns > 0.0) || !(gate_time_2q_ns > 0.0))
        throw ConfigError("gate times must be positive");
    if (shots < 1) throw ConfigError("shots must be >= 1");
}

namespace {

double gate_time_us(const NoiseModel& nm, GateKind kind) {
    double ns = is_rotation(kind) ? nm.gate_time_1q_ns : nm.gate_time_2q_ns;
    return ns * 1e-3;
}

double dephasing_rate(const NoiseModel& nm) {
    // 1/Tphi; zero when T2 == 2*T1 exactly
    return 1.0 / nm.t2_us - 1.0 / (2.0 * nm.t1_us);
}

}  // namespace

double NoiseModel::gamma_for(GateKind kind) const {
    return 1.0 - std::exp(-gate_time_us(*this, kind) / t1_us);
}

double NoiseModel::z_prob_for(GateKind kind) const {
    double rate = dephasing_rate(*this);
    if (rate <= 0.0) return 0.0;
    // a dephasing event randomizes the phase (Z half the time), so the net
    // Z-flip probability is half the event probability
    double lambda = 1.0 - std::exp(-gate_time_us(*this, kind) * rate);
    return 0.5 * lambda;
}

std::vector<NoiseOp> expand_noisy_ops(const std::vector<Gate>& gates, const NoiseModel& nm) {
    nm.validate();
    std::vector<NoiseOp> ops;
    ops.reserve(gates.size() * 5);
    for (const Gate& g : gates) {
        ops.push_back({NoiseOp::Type::Unitary, g, -1, 0.0});
        double gamma = nm.gamma_for(g.kind);
        double pz = nm.z_prob_for(g.kind);
        int touched[2] = {g.q0, g.q1};
        int n_touched = is_rotation(g.kind) ? 1 : 2;
        for (int t = 0; t < n_touched; ++t) {
            int q = touched[t];
            if (gamma > 0.0) ops.push_back({NoiseOp::Type::AmpDamp, Gate{}, q, gamma});
            if (pz > 0.0) ops.push_back({NoiseOp::Type::Dephase, Gate{}, q, pz});
        }
    }
    return ops;
}

namespace {

using Amps = std::vector<cdouble>;

double one_population(const Amps& a, int q) {
    const std::size_t bit = std::size_t{1} << q;
    double p1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i & bit) p1 += std::norm(a[i]);
    return p1;
}

// relaxation event: measure qubit q, then set it to |0>.
// outcome_one selects the branch; caller draws it from the |1> population.
void apply_reset(Amps& a, int q, bool outcome_one, double p1) {
    const std::size_t bit = std::size_t{1} << q;
    if (outcome_one) {
        const double inv = 1.0 / std::sqrt(std::max(p1, 1e-300));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i & bit) continue;
            a[i] = a[i | bit] * inv;
            a[i | bit] = cdouble{0.0, 0.0};
        }
    } else {
        const double inv = 1.0 / std::sqrt(std::max(1.0 - p1, 1e-300));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i & bit) a[i] = cdouble{0.0, 0.0};
            else a[i] *= inv;
        }
    }
}

void apply_z(Amps& a, int q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i & bit) a[i] = -a[i];
}

void apply_gate_amps(Amps& a, int n_qubits, const Gate& g) {
    StateVector view;
    view.n_qubits = n_qubits;
    view.amplitudes = std::move(a);
    apply_gate(view, g);
    a = std::move(view.amplitudes);
}

Gate adjoint(const Gate& g) {
    Gate inv = g;
    if (is_rotation(g.kind)) inv.angle = -g.angle;
    return inv;  // CX/CZ are self-inverse
}

}  // namespace

double run_noisy_trajectories(int n_qubits, const std::vector<NoiseOp>& ops, int shots,
                              std::uint64_t seed) {
    if (shots < 1) throw ConfigError("shots must be >= 1");
    const std::size_t dim = std::size_t{1} << n_qubits;
    constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

    // Noise events fire with state-independent probabilities, so every
    // shot's event-site sequence can be sampled before any state evolution.
    // One clean forward pass then checkpoints the state only at sites where
    // some shot branches off, and one backward pass stores the
    // adjoint-evolved all-zeros projector only at terminal sites. A
    // single-event shot costs one inner product; multi-event shots replay
    // the gate segments between their sites.
    struct Site {
        std::size_t op_index;
        NoiseOp::Type type;
        int qubit;
        double prob;
    };
    std::vector<Site> sites;
    for (std::size_t k = 0; k < ops.size(); ++k)
        if (ops[k].type != NoiseOp::Type::Unitary)
            sites.push_back({k, ops[k].type, ops[k].qubit, ops[k].param});
    const std::size_t n_sites = sites.size();

    std::vector<double> survival(n_sites);
    {
        double s = 1.0;
        for (std::size_t i = 0; i < n_sites; ++i) {
            s *= (1.0 - sites[i].prob);
            survival[i] = s;
        }
    }
    const double s_total = n_sites == 0 ? 1.0 : survival.back();

    // first site j > pos with survival[j] <= u * survival[pos]
    auto next_event = [&](std::ptrdiff_t pos, double u) -> std::ptrdiff_t {
        double s_prev = pos < 0 ? 1.0 : survival[static_cast<std::size_t>(pos)];
        if (u < s_total / s_prev) return -1;  // no further events
        double target = u * s_prev;
        auto begin = survival.begin() + (pos + 1);
        auto it = std::lower_bound(begin, survival.end(), target,
                                   [](double s, double t) { return s > t; });
        return it - survival.begin();
    };

    Rng rng(seed);

    // phase 1: event skeleton of every shot
    std::vector<std::vector<std::ptrdiff_t>> skeleton(shots);
    std::vector<std::size_t> checkpoint_slot(n_sites, kNoSlot);
    std::vector<std::size_t> phi_slot(n_sites, kNoSlot);
    std::size_t n_checkpoints = 0, n_phis = 0;
    for (int shot = 0; shot < shots; ++shot) {
        std::ptrdiff_t pos = next_event(-1, rng.uniform());
        while (pos >= 0) {
            skeleton[shot].push_back(pos);
            pos = next_event(pos, rng.uniform());
        }
        if (!skeleton[shot].empty()) {
            std::size_t first = static_cast<std::size_t>(skeleton[shot].front());
            std::size_t last = static_cast<std::size_t>(skeleton[shot].back());
            if (checkpoint_slot[first] == kNoSlot) checkpoint_slot[first] = n_checkpoints++;
            if (phi_slot[last] == kNoSlot) phi_slot[last] = n_phis++;
        }
    }

    // phase 2: clean forward pass, checkpointing only branch-off sites
    static thread_local std::vector<cdouble> checkpoints;
    static thread_local Amps state, phi_state, work;
    checkpoints.resize(n_checkpoints * dim);
    state.assign(dim, cdouble{0.0, 0.0});
    state[0] = cdouble{1.0, 0.0};
    {
        std::size_t site = 0;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            if (ops[k].type == NoiseOp::Type::Unitary) {
                apply_gate_amps(state, n_qubits, ops[k].gate);
            } else {
                if (checkpoint_slot[site] != kNoSlot)
                    std::copy(state.begin(), state.end(),
                              checkpoints.begin() + checkpoint_slot[site] * dim);
                ++site;
            }
        }
    }
    const double p0_clean = std::min(std::norm(state[0]), 1.0);

    // phase 3: backward pass, phi_i = (gates after site i)^dagger |0...0>
    static thread_local std::vector<cdouble> phis;
    phis.resize(n_phis * dim);
    if (n_phis > 0) {
        phi_state.assign(dim, cdouble{0.0, 0.0});
        phi_state[0] = cdouble{1.0, 0.0};
        std::size_t site = n_sites;
        for (std::size_t k = ops.size(); k-- > 0;) {
            if (ops[k].type == NoiseOp::Type::Unitary) {
                apply_gate_amps(phi_state, n_qubits, adjoint(ops[k].gate));
            } else {
                --site;
                if (phi_slot[site] != kNoSlot)
                    std::copy(phi_state.begin(), phi_state.end(),
                              phis.begin() + phi_slot[site] * dim);
            }
        }
    }

    // lazily cached |1> population at branch-off sites along the clean path
    std::vector<double> p1_clean(n_sites, -1.0);

    // phase 4: resolve shots
    int zeros = 0;
    for (int shot = 0; shot < shots; ++shot) {
        const auto& seq = skeleton[shot];
        if (seq.empty()) {
            if (rng.uniform() < p0_clean) ++zeros;
            continue;
        }
        std::size_t first = static_cast<std::size_t>(seq.front());
        const cdouble* cp = checkpoints.data() + checkpoint_slot[first] * dim;
        work.assign(cp, cp + dim);
        if (sites[first].type == NoiseOp::Type::AmpDamp) {
            if (p1_clean[first] < 0.0) p1_clean[first] = one_population(work, sites[first].qubit);
            double p1 = p1_clean[first];
            apply_reset(work, sites[first].qubit, rng.uniform() < p1, p1);
        } else {
            apply_z(work, sites[first].qubit);
        }
        for (std::size_t e = 1; e < seq.size(); ++e) {
            std::size_t prev = static_cast<std::size_t>(seq[e - 1]);
            std::size_t cur = static_cast<std::size_t>(seq[e]);
            for (std::size_t k = sites[prev].op_index + 1; k < sites[cur].op_index; ++k)
                if (ops[k].type == NoiseOp::Type::Unitary)
                    apply_gate_amps(work, n_qubits, ops[k].gate);
            if (sites[cur].type == NoiseOp::Type::AmpDamp) {
                double p1 = one_population(work, sites[cur].qubit);
                apply_reset(work, sites[cur].qubit, rng.uniform() < p1, p1);
            } else {
                apply_z(work, sites[cur].qubit);
            }
        }
        // remaining ops are unitary; <0|U_rest|work> = phi^dagger work
        std::size_t last = static_cast<std::size_t>(seq.back());
        const cdouble* phi = phis.data() + phi_slot[last] * dim;
        cdouble z{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) z += std::conj(phi[i]) * work[i];
        if (rng.uniform() < std::min(std::norm(z), 1.0)) ++zeros;
    }
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

double fidelity_noisy(const CircuitSpec& spec, std::span<const double> x,
                      std::span<const double> y, const NoiseModel& noise) {
    auto gates = bind_inversion_gates(spec, x, y);
    auto ops = expand_noisy_ops(gates, noise);
    return run_noisy_trajectories(spec.n_qubits, ops, noise.shots, noise.rng_seed);
}

}  // namespace qks
