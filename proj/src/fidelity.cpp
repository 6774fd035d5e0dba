#include "qks/fidelity.hpp"

#include "qks/common.hpp"
#include "qks/rng.hpp"

namespace qks {

double inversion_test_probability(const CircuitSpec& spec, std::span<const double> x,
                                  std::span<const double> y) {
    StateVector sv = StateVector::zero_state(spec.n_qubits);
    for (const Gate& g : bind_inversion_gates(spec, x, y)) apply_gate(sv, g);
    return std::norm(sv.amplitudes[0]);
}

double fidelity_shots(const CircuitSpec& spec, std::span<const double> x,
                      std::span<const double> y, int shots, std::uint64_t seed) {
    if (shots < 1) throw ConfigError("shots must be >= 1");
    double p = inversion_test_probability(spec, x, y);
    if (p > 1.0) p = 1.0;
    Rng rng(seed);
    int zeros = 0;
    for (int s = 0; s < shots; ++s)
        if (rng.uniform() < p) ++zeros;
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

}  // namespace qks
