#include "qks/ansatz.hpp"

#include <json.hpp>

#include "qks/common.hpp"

namespace qks {

CircuitSpec build_ansatz(int n_qubits, int n_params, double bandwidth) {
    if (n_qubits < 1) throw ConfigError("ansatz needs at least 1 qubit");
    if (n_params < 1 || n_params % n_qubits != 0)
        throw ConfigError("parameter count " + std::to_string(n_params) +
                          " is not a positive multiple of " + std::to_string(n_qubits) +
                          " qubits");
    if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");

    CircuitSpec spec;
    spec.n_qubits = n_qubits;
    spec.n_params = n_params;
    spec.bandwidth = bandwidth;
    const int layers = n_params / n_qubits;
    for (int l = 0; l < layers; ++l) {
        GateKind rot = (l % 2 == 0) ? GateKind::RX : GateKind::RY;
        for (int q = 0; q < n_qubits; ++q)
            spec.layout.push_back({rot, q, -1, l * n_qubits + q});
        if (l + 1 < layers) {
            GateKind ent = (l % 2 == 0) ? GateKind::CZ : GateKind::CX;
            for (int q = 0; q + 1 < n_qubits; ++q)
                spec.layout.push_back({ent, q, q + 1, -1});
        }
    }
    return spec;
}

std::vector<Gate> bind_gates(const CircuitSpec& spec, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(spec.n_params))
        throw ComputeError("encode: expected " + std::to_string(spec.n_params) +
                           " features, got " + std::to_string(x.size()));
    std::vector<Gate> gates;
    gates.reserve(spec.layout.size());
    for (const auto& slot : spec.layout) {
        Gate g{slot.kind, slot.q0, slot.q1, 0.0};
        if (slot.param_slot >= 0) g.angle = spec.bandwidth * x[slot.param_slot];
        gates.push_back(g);
    }
    return gates;
}

std::vector<Gate> bind_inversion_gates(const CircuitSpec& spec, std::span<const double> x,
                                       std::span<const double> y) {
    std::vector<Gate> gates = bind_gates(spec, x);
    std::vector<Gate> inverse = bind_gates(spec, y);
    for (auto it = inverse.rbegin(); it != inverse.rend(); ++it) {
        Gate g = *it;
        if (is_rotation(g.kind)) g.angle = -g.angle;
        gates.push_back(g);  // CX/CZ are self-inverse
    }
    return gates;
}

StateVector encode(const CircuitSpec& spec, std::span<const double> x) {
    StateVector sv = StateVector::zero_state(spec.n_qubits);
    for (const Gate& g : bind_gates(spec, x)) apply_gate(sv, g);
    return sv;
}

namespace {

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::RX: return "rx";
        case GateKind::RY: return "ry";
        case GateKind::CX: return "cx";
        case GateKind::CZ: return "cz";
    }
    return "?";
}

GateKind kind_from_name(const std::string& s) {
    if (s == "rx") return GateKind::RX;
    if (s == "ry") return GateKind::RY;
    if (s == "cx") return GateKind::CX;
    if (s == "cz") return GateKind::CZ;
    throw ConfigError("unknown gate kind '" + s + "'");
}

}  // namespace

std::string CircuitSpec::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits;
    j["n_params"] = n_params;
    j["bandwidth"] = bandwidth;
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& slot : layout) {
        nlohmann::json g;
        g["gate"] = kind_name(slot.kind);
        if (slot.q1 >= 0) g["qubits"] = {slot.q0, slot.q1};
        else g["qubits"] = {slot.q0};
        if (slot.param_slot >= 0) g["slot"] = slot.param_slot;
        gates.push_back(g);
    }
    j["layout"] = gates;
    return j.dump(2);
}

CircuitSpec CircuitSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CircuitSpec spec;
    spec.n_qubits = j.at("n_qubits").get<int>();
    spec.n_params = j.at("n_params").get<int>();
    spec.bandwidth = j.at("bandwidth").get<double>();
    for (const auto& g : j.at("layout")) {
        GateSlot slot;
        slot.kind = kind_from_name(g.at("gate").get<std::string>());
        auto qubits = g.at("qubits");
        slot.q0 = qubits.at(0).get<int>();
        slot.q1 = qubits.size() > 1 ? qubits.at(1).get<int>() : -1;
        slot.param_slot = g.contains("slot") ? g.at("slot").get<int>() : -1;
        spec.layout.push_back(slot);
    }
    return spec;
}

}  // namespace qks
