#pragma once

#include <string>

#include "fermistab/circuit.hpp"

namespace fermistab {

// Circuit-level Pauli noise strengths: depolarizing after one-qubit (p1) and
// two-qubit (p2) gates, bit-flip after reset (ps), and measurement flip
// probability (pm).
struct ErrorModel {
    std::string name = "custom";
    double p1 = 0.0;
    double p2 = 0.0;
    double ps = 0.0;
    double pm = 0.0;

    // All four rates equal to p.
    static ErrorModel standard_depolarizing(double p);
    // Two-qubit dominated: p2 = p, p1 = p/10, ps = 2p, pm = 5p.
    static ErrorModel superconducting_inspired(double p);
    // "sd" / "si" by name.
    static ErrorModel from_name(const std::string& name, double p);
};

// Returns a copy of `c` with noise inserted after every unitary gate and
// reset, and with the flip probability attached to every measurement.
// Zero-probability channels are omitted. Throws std::invalid_argument if `c`
// already contains noise.
Circuit apply_noise(const Circuit& c, const ErrorModel& model);

}  // namespace fermistab
