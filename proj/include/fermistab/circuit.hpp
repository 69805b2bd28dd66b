#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fermistab {

enum class Op : uint8_t {
    // Single-qubit Cliffords.
    H, S, S_DAG, SQRT_X, SQRT_X_DAG, SQRT_Y, SQRT_Y_DAG, X, Y, Z,
    // Two-qubit Cliffords (targets in pairs).
    CX, CZ, CY, SWAP,
    // Non-unitary operations.
    M,       // Z-basis measurement; arg = classical flip probability
    R,       // reset to |0>
    // Noise channels; arg = probability.
    DEPOLARIZE1, DEPOLARIZE2, X_ERROR,
    // Annotations on measurement records (targets are rec[-k] offsets).
    DETECTOR, OBSERVABLE_INCLUDE,
};

const char* op_name(Op op);
bool is_unitary(Op op);
bool is_single_qubit_gate(Op op);
bool is_two_qubit_gate(Op op);
bool is_noise(Op op);
bool is_annotation(Op op);
Op gate_inverse(Op op);

struct Instruction {
    Op op;
    double arg = 0.0;                 // probability / observable index
    std::vector<uint32_t> targets;    // qubits; for annotations: rec offsets k (rec[-k])

    bool operator==(const Instruction& other) const {
        return op == other.op && arg == other.arg && targets == other.targets;
    }
};

// A flat Clifford circuit with measurement-record annotations, using a
// stim-compatible text format for the supported subset of operations.
struct Circuit {
    uint32_t num_qubits = 0;
    std::vector<Instruction> instructions;

    void append(Op op, std::initializer_list<uint32_t> targets, double arg = 0.0);
    void append(Op op, const std::vector<uint32_t>& targets, double arg = 0.0);
    void append(const Instruction& instr) { instructions.push_back(instr); }
    void extend(const Circuit& other);

    std::size_t count_measurements() const;
    std::size_t count_detectors() const;
    std::size_t count_observables() const;  // = max observable index + 1
    // Unitary gate counts; excludes M/R/noise/annotations.
    std::size_t count_1q_gates() const;
    std::size_t count_2q_gates() const;
    bool has_noise() const;

    // Structural validation; throws std::invalid_argument with a reason.
    void validate() const;

    std::string to_text() const;
    static Circuit from_text(const std::string& text);
};

// Inverse of a purely unitary instruction span (used for mirror circuits).
std::vector<Instruction> inverted_gates(const std::vector<Instruction>& gates);

}  // namespace fermistab
