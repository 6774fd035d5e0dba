#pragma once

#include <cstdint>
#include <span>

#include "qks/ansatz.hpp"

namespace qks {

// Exact all-zeros probability of the inversion-test circuit
// U(y)^-1 U(x) |0...0>. Equals |<encode(y)|encode(x)>|^2 analytically; this
// routine actually runs the inverted circuit so the two routes stay
// independent checks of each other.
double inversion_test_probability(const CircuitSpec& spec, std::span<const double> x,
                                  std::span<const double> y);

// Shot-sampled inversion test: `shots` Bernoulli draws from the exact
// all-zeros probability. Deterministic given seed.
double fidelity_shots(const CircuitSpec& spec, std::span<const double> x,
                      std::span<const double> y, int shots, std::uint64_t seed);

}  // namespace qks
