#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermistab/circuit.hpp"
#include "fermistab/encodings.hpp"
#include "fermistab/lattice.hpp"
#include "fermistab/model.hpp"

namespace fermistab {

// Shape of the mirrored logical fragment.
enum class CircuitKind { FullTrotter, RandomLogical };
// What the destructive final measurement estimates.
enum class ReadoutKind { Occupation, Hopping };
// Error-mitigation overlay: GP = global-parity postselection, SR = stabilizer
// readout, SM = stabilizer measurement (optionally flagged), VQED = verified
// quantum error detection.
enum class Mitigation { None, GP, SR, SM, SMFlags, VQED };

const char* circuit_kind_name(CircuitKind k);
const char* readout_kind_name(ReadoutKind k);
const char* mitigation_name(Mitigation m);
CircuitKind circuit_kind_from_name(const std::string& name);
ReadoutKind readout_kind_from_name(const std::string& name);
Mitigation mitigation_from_name(const std::string& name);

// Full description of one benchmark circuit. `trotter_steps` counts forward
// Trotter steps; the assembled circuit always mirrors the logical fragment
// with its exact inverse. `fraction` (random-logical only) selects
// floor(fraction * 2L^2) of the 4L^2 Hamiltonian terms.
struct ExperimentSpec {
    Encoding encoding = Encoding::JW;
    std::size_t lattice_side = 4;
    CircuitKind kind = CircuitKind::FullTrotter;
    int trotter_steps = 1;
    double fraction = 0.5;
    uint64_t logical_seed = 1;
    ReadoutKind readout = ReadoutKind::Occupation;
    uint32_t hopping_color = 0;   // which edge color class is read out
    bool hopping_yy = false;      // read the YY hopping summand instead of XX
    Mitigation mitigation = Mitigation::None;
    int vqed_layers = 2;
    uint64_t vqed_seed = 1;
    std::vector<uint8_t> occupation;  // target mode occupations; empty = vacuum
    int angle_eighths = 3;
};

struct DetectorInfo {
    std::string label;
};

struct ObservableInfo {
    std::string label;
};

struct GateCounts {
    std::size_t one_qubit = 0;
    std::size_t two_qubit = 0;
    std::size_t total() const { return one_qubit + two_qubit; }
};

// An assembled benchmark circuit plus its bookkeeping: detector/observable
// labels (parallel to the annotation order), the data-qubit count (gadget aux
// qubits live above it), the instruction index where state preparation ends,
// and the first VQED verification column among the observables (UINT32_MAX
// when absent).
struct ExperimentCircuit {
    ExperimentSpec spec;
    Circuit circuit;
    std::vector<DetectorInfo> detectors;
    std::vector<ObservableInfo> observables;
    std::size_t num_data_qubits = 0;
    std::size_t prep_end = 0;
    uint32_t vqed_b_start = UINT32_MAX;
    GateCounts counts;
};

// Validates the spec (std::invalid_argument on bad combinations: hopping
// readout and the stabilizer mitigations SR/SM/SM+flags/VQED exist only for
// the DK encoding, GP only for occupation readout, DK stabilizer mitigations
// need L >= 4), builds prep + mirrored fragment + readout + annotations, and
// verifies every detector/observable is noiselessly deterministic.
ExperimentCircuit assemble_experiment(const ExperimentSpec& spec);

// Empty string when the spec is valid; otherwise the rule it violates.
// Cheap (no circuit assembly), so sweep expansion can screen combinations.
std::string spec_violation(const ExperimentSpec& spec);

}  // namespace fermistab
