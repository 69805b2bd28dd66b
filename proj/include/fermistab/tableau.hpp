#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fermistab/circuit.hpp"
#include "fermistab/pauli.hpp"

namespace fermistab {

// Stabilizer-tableau simulator over n qubits. Rows 0..n-1 hold destabilizers,
// rows n..2n-1 stabilizers; the state starts as |0...0>.
class TableauSimulator {
  public:
    explicit TableauSimulator(std::size_t num_qubits, std::uint64_t seed = 0);

    std::size_t num_qubits() const { return n_; }

    void apply_gate(Op op, uint32_t a);
    void apply_gate(Op op, uint32_t a, uint32_t b);
    // Applies a Pauli as a gate (its phase is ignored).
    void apply_pauli(const PauliString& p);

    struct MeasureResult {
        bool outcome = false;
        bool random = false;
        // For random collapses: the pre-collapse stabilizer row that
        // anticommuted with Z_q. The two measurement branches differ by this
        // Pauli applied after the collapse.
        PauliString collapse;
    };

    // Z-basis measurement. When the outcome is random, `force` (if given)
    // selects the branch instead of the internal RNG.
    MeasureResult measure_z(uint32_t q, std::optional<bool> force = std::nullopt);

    // Measure, then flip to |0>. Returns the measurement result (pre-flip).
    MeasureResult reset(uint32_t q, std::optional<bool> force = std::nullopt);

    // +1 or -1 when p (Hermitian, phase +-1) lies in the +-stabilizer group;
    // nullopt when the measurement of p would be random.
    std::optional<int> expectation(const PauliString& p) const;

    std::vector<PauliString> stabilizers() const;
    std::vector<PauliString> destabilizers() const;

  private:
    bool xbit(std::size_t row, std::size_t q) const;
    bool zbit(std::size_t row, std::size_t q) const;
    void set_xbit(std::size_t row, std::size_t q, bool v);
    void set_zbit(std::size_t row, std::size_t q, bool v);
    PauliString row_to_pauli(std::size_t row) const;
    // row h := row i * row h, with exact sign tracking.
    void rowsum(std::size_t h, std::size_t i);

    std::size_t n_ = 0;
    std::size_t wpr_ = 0;  // 64-bit words per row
    std::vector<uint64_t> x_, z_;
    std::vector<uint8_t> sign_;
    std::mt19937_64 rng_;
};

// One random collapse met while running a circuit with branch choices forced
// to 0. `frame` is the Pauli separating the two branches, already adjusted so
// that it applies just after the collapsing micro-op.
struct CollapsePoint {
    std::size_t instruction_index = 0;
    std::size_t target_offset = 0;              // micro-op index inside the instruction
    std::optional<std::size_t> record_index;    // set for M, empty for R
    PauliString frame;
};

struct ReferenceRun {
    std::size_t num_measurements = 0;
    std::vector<bool> records;              // outcomes with all random branches forced to 0
    std::vector<CollapsePoint> collapses;
    std::vector<bool> detector_values;
    std::vector<bool> observable_values;
};

// Simulates a noise-free circuit, forcing every random branch to 0.
// Throws if the circuit contains noise instructions.
ReferenceRun run_reference(const Circuit& c);

// Record-flip bits caused by inserting the Pauli `frame` just before micro-op
// `target_offset` of instruction `instruction_index` (offsets past the last
// micro-op roll over to the next instruction). Noise instructions are skipped.
std::vector<bool> propagate_frame(const Circuit& c, std::size_t instruction_index,
                                  std::size_t target_offset, const PauliString& frame);

// U P U^dag for the unitary U formed by instructions [begin, end) of c, with
// exact sign tracking. Annotations are skipped; measurements, resets and
// noise in the span raise std::invalid_argument.
PauliString conjugate_through(const Circuit& c, std::size_t begin, std::size_t end,
                              PauliString p);

// Absolute measurement-record indices referenced by each DETECTOR /
// OBSERVABLE_INCLUDE, in order of appearance (observables merged by index).
struct ParitySets {
    std::vector<std::vector<std::size_t>> detectors;
    std::vector<std::vector<std::size_t>> observables;
};
ParitySets collect_parity_sets(const Circuit& c);

struct DeterminismReport {
    bool deterministic = true;
    std::string detail;  // first offending detector/observable when not deterministic
};

// Verifies that every detector and observable parity is independent of the
// random branch choices of a noise-free circuit.
DeterminismReport check_determinism(const Circuit& c);

}  // namespace fermistab
