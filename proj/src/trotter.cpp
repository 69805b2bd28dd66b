#include "fermistab/trotter.hpp"

#include <numeric>
#include <stdexcept>

#include "fermistab/rng.hpp"
#include "fermistab/rotations.hpp"

namespace fermistab {

namespace {

// Folds eighths into {0..3} and rejects the even cases, where the fused
// blocks degenerate (the hopping part becomes a Pauli or the identity).
int require_odd_eighths(int angle_eighths, const char* who) {
    int k = angle_eighths % 4;
    if (k < 0) k += 4;
    if (k % 2 == 0) {
        throw std::invalid_argument(std::string(who) +
                                    " requires an odd multiple of pi/4 as the Clifford angle");
    }
    return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Derby-Klassen

void append_dk_edge_block(Circuit& c, const DkArtifacts& art, uint32_t edge_id,
                          int angle_eighths) {
    int k = require_odd_eighths(angle_eighths, "the fused DK edge block");
    const SquareLattice& lat = art.lattice();
    const LatticeEdge& e = lat.edge(edge_id);
    uint32_t a = lat.vertex_qubit(e.tail);
    uint32_t b = lat.vertex_qubit(e.head);
    uint32_t f = lat.face_qubit(e.blue_face);

    FermiHubbardTerm hop{TermKind::Hopping, {e.tail, e.head}, edge_id};
    EncodedTerm enc = dk_encode(hop, art);
    int sign = enc.summands.at(0).coefficient < 0 ? -1 : 1;
    char qf = enc.summands.at(0).pauli.letter(f);
    if ((qf != 'X' && qf != 'Y') || enc.summands[0].pauli.letter(a) != 'X' ||
        enc.summands[0].pauli.letter(b) != 'X') {
        throw std::logic_error("unexpected DK hopping summand shape");
    }

    // The block for 3pi/4; pi/4 is its inverse (the pi difference per factor
    // is a whole turn of (XX+YY)Q / a global phase of ZZ).
    Circuit block;
    block.num_qubits = c.num_qubits;
    if (sign < 0) {
        // exp(+i 3pi/4 (XX+YY)Q) = exp(-i 3pi/4 (XX+YY)Q) * Z_a Z_b.
        block.append(Op::Z, {a});
        block.append(Op::Z, {b});
    }
    block.append(Op::S_DAG, {a});
    block.append(Op::S_DAG, {b});
    block.append(qf == 'X' ? Op::H : Op::SQRT_X, {f});
    block.append(Op::CZ, {f, a});
    block.append(Op::CZ, {f, b});
    block.append(Op::SWAP, {a, b});
    block.append(Op::S, {a});
    block.append(Op::S, {b});
    block.append(qf == 'X' ? Op::H : Op::SQRT_X_DAG, {f});

    if (k == 3) {
        c.extend(block);
    } else {
        for (const auto& ins : inverted_gates(block.instructions)) c.append(ins);
    }
}

void append_trotter_step_dk(Circuit& c, const DkArtifacts& art, int angle_eighths) {
    for (uint32_t cls = 0; cls < 4; ++cls) {
        for (uint32_t edge_id : art.lattice().color_class(cls)) {
            append_dk_edge_block(c, art, edge_id, angle_eighths);
        }
    }
}

// ---------------------------------------------------------------------------
// Jordan-Wigner swap network

JwSwapNetwork::JwSwapNetwork(const SquareLattice& lat) : lattice(&lat) {
    std::size_t n = lat.num_vertices();
    slots = lat.snake_order();
    qubit_of_mode.assign(n, 0);
    for (std::size_t s = 0; s < n; ++s) qubit_of_mode[slots[s]] = static_cast<uint32_t>(s);
    adjacency.assign(n * n, 0);
    for (const auto& e : lat.edges()) {
        adjacency[e.tail * n + e.head] += 1;
        adjacency[e.head * n + e.tail] += 1;
    }
}

void JwSwapNetwork::append_step(Circuit& c, int angle_eighths) {
    require_odd_eighths(angle_eighths, "the JW swap network");
    std::size_t n = slots.size();
    for (std::size_t layer = 0; layer < n; ++layer) {
        for (std::size_t s = layer % 2; s + 1 < n; s += 2) {
            uint32_t ma = slots[s];
            uint32_t mb = slots[s + 1];
            uint32_t qa = qubit_of_mode[ma];
            uint32_t qb = qubit_of_mode[mb];
            // Adjacent lines carry no Z string, so the fused hopping+Coulomb
            // rotation at an odd angle is exactly SWAP, once per edge joining
            // the pair (twice on the doubled edges of L = 2).
            for (int m = 0; m < adjacency[ma * n + mb]; ++m) c.append(Op::SWAP, {qa, qb});
            c.append(Op::CZ, {qa, qb});  // the fswap, with its SWAP virtualized
            std::swap(slots[s], slots[s + 1]);
        }
    }
}

// ---------------------------------------------------------------------------
// Ternary tree

void append_trotter_step_tt(Circuit& c, const FermiHubbardModel& model, const TernaryTree& tree,
                            int angle_eighths) {
    for (const auto& term : model.terms) {
        EncodedTerm enc = tt_encode(term, tree);
        if (term.kind == TermKind::Hopping) {
            append_term_rotations(c, enc, angle_eighths);
        } else {
            // I, -V_i, -V_j, V_i V_j: only the pair summand survives the
            // per-step cancellation of the singles.
            append_summand_rotation(c, enc.summands.at(3), angle_eighths);
        }
    }
}

// ---------------------------------------------------------------------------
// Random logical circuits

std::vector<std::size_t> sample_term_subset(std::size_t universe, std::size_t count,
                                            uint64_t seed) {
    if (count > universe) {
        throw std::invalid_argument("cannot sample more terms than the universe holds");
    }
    std::vector<std::size_t> idx(universe);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    uint64_t state = seed;
    for (std::size_t i = 0; i < count; ++i) {
        // Explicit draws keep the sequence identical across standard
        // libraries; the modulo bias is irrelevant at these sizes.
        std::size_t r = i + static_cast<std::size_t>(splitmix64(state) % (universe - i));
        std::swap(idx[i], idx[r]);
    }
    idx.resize(count);
    return idx;
}

void append_random_logical(Circuit& c, const std::vector<EncodedTerm>& universe,
                           std::size_t count, uint64_t seed, int angle_eighths) {
    for (std::size_t id : sample_term_subset(universe.size(), count, seed)) {
        append_term_rotations(c, universe[id], angle_eighths);
    }
}

}  // namespace fermistab
