#pragma once

#include <cstdint>
#include <vector>

#include "fermistab/circuit.hpp"
#include "fermistab/encodings.hpp"
#include "fermistab/model.hpp"

namespace fermistab {

// ---------------------------------------------------------------------------
// Derby-Klassen parallel schedule

// The fused per-edge block: the Coulomb ZZ rotation followed by the two
// hopping rotations of the edge, all at (sign * eighths * pi/4), compiled
// into 3 two-qubit + 6 one-qubit gates (+2 Z gates on negative edges) via
// the iSWAP identity exp(-i 3pi/4 (XX+YY)) = iSWAP = (S x S) SWAP CZ.
// Valid for odd angle_eighths only (even multiples degenerate to Paulis);
// throws std::invalid_argument otherwise.
void append_dk_edge_block(Circuit& c, const DkArtifacts& art, uint32_t edge_id,
                          int angle_eighths = 3);

// One forward Trotter step for DK: edge blocks scheduled by the 4
// support-disjoint hopping color classes (ascending edge id within each);
// the single-Z Coulomb parts are ordered to the end of the step where each
// vertex accumulates a full turn and they vanish.
void append_trotter_step_dk(Circuit& c, const DkArtifacts& art, int angle_eighths = 3);

// ---------------------------------------------------------------------------
// Jordan-Wigner fermionic swap network

// Odd-even transposition network over the snake mode order. Fermionic swaps
// are virtualized: a mode is pinned to its starting qubit and only the CZ of
// each fswap is emitted, while `slots` tracks the current line order. Every
// unordered mode pair crosses exactly once per step (L^2 brickwork layers, a
// full reversal); lattice-adjacent pairs additionally get their fused
// hopping+Coulomb rotation, which at odd angle_eighths is exactly SWAP.
struct JwSwapNetwork {
    explicit JwSwapNetwork(const SquareLattice& lattice);

    const SquareLattice* lattice = nullptr;
    std::vector<uint32_t> qubit_of_mode;  // fixed physical qubit per mode
    std::vector<uint32_t> slots;          // current slot -> mode
    // adjacency[a * n + b] = number of lattice edges joining modes a and b
    // (2 on the doubled edges of L = 2).
    std::vector<uint8_t> adjacency;

    // Appends one forward Trotter step; odd angle_eighths only.
    void append_step(Circuit& c, int angle_eighths = 3);
};

// ---------------------------------------------------------------------------
// Ternary tree sequential schedule

// One forward Trotter step for TT: per model term in order, ladder rotations
// for the hopping summands and for the Coulomb V_i V_j summand; the single-V
// Coulomb parts are ordered to the end of the step where they vanish.
void append_trotter_step_tt(Circuit& c, const FermiHubbardModel& model, const TernaryTree& tree,
                            int angle_eighths = 3);

// ---------------------------------------------------------------------------
// Random logical circuits

// `count` distinct indices from [0, universe), drawn uniformly without
// replacement, in draw order; fully determined by the seed.
std::vector<std::size_t> sample_term_subset(std::size_t universe, std::size_t count,
                                            uint64_t seed);

// Emits ladder rotations for every summand of each sampled term, in draw
// order (single-Z parts are kept: partial term sets do not cancel them).
void append_random_logical(Circuit& c, const std::vector<EncodedTerm>& universe,
                           std::size_t count, uint64_t seed, int angle_eighths = 3);

}  // namespace fermistab
