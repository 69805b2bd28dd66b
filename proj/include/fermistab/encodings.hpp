#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermistab/lattice.hpp"
#include "fermistab/model.hpp"
#include "fermistab/pauli.hpp"

namespace fermistab {

enum class Encoding { JW, TT, DK };

const char* encoding_name(Encoding e);
// Parses "JW" / "TT" / "DK" (case-insensitive); throws std::invalid_argument.
Encoding encoding_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Jordan-Wigner

// The 2n JW Majorana strings: g_2j = Z_0..Z_{j-1} X_j, g_{2j+1} = Z..Z Y_j,
// where j is the position in `ordering` (mode -> line index). An empty
// ordering means the identity order.
std::vector<PauliString> jw_majoranas(std::size_t n_modes,
                                      const std::vector<uint32_t>& ordering = {});

// Encodes one term under JW. `ordering` maps mode id -> line index; qubit q
// hosts the mode at line index q.
EncodedTerm jw_encode(const FermiHubbardTerm& term, std::size_t n_modes,
                      const std::vector<uint32_t>& ordering = {});

// ---------------------------------------------------------------------------
// Ternary tree

// Balanced ternary tree over n qubits: node i's children are 3i+1, 3i+2,
// 3i+3 (when < n) on branches X, Y, Z. Each of the 2n+1 missing-child slots
// terminates one root-to-slot path operator.
struct TernaryTree {
    std::size_t n = 0;

    bool has_child(std::size_t node, int branch) const { return 3 * node + 1 + branch < n; }
    std::size_t child(std::size_t node, int branch) const { return 3 * node + 1 + branch; }

    // All 2n+1 path operators, one per vacant (node, branch) slot, in
    // (node, branch) order.
    std::vector<PauliString> all_paths() const;
};

TernaryTree build_ternary_tree(std::size_t n_modes);

// The 2n Majorana strings of the tree encoding. For each node v the pair
// (p_X(v), p_Y(v)) forms (g_2j, g_{2j+1}), where p_B(v) descends from v's
// B-child along Z branches; modes are ordered by the lexicographic rank of
// p_X (per-qubit letters, I < X < Y < Z). The leftover all-Z path is dropped.
std::vector<PauliString> tt_majoranas(const TernaryTree& tree);

// Encodes one term under the tree encoding (mode j = lattice vertex j).
EncodedTerm tt_encode(const FermiHubbardTerm& term, const TernaryTree& tree);

// ---------------------------------------------------------------------------
// Derby-Klassen

// The operator content of the DK encoding on a lattice: vertex operators,
// signed edge operators, the red-face stabilizers with their face (T_k) and
// vertex (R_k) restrictions, and destabilizers for syndrome recovery.
// All algebraic invariants are checked at construction.
class DkArtifacts {
  public:
    explicit DkArtifacts(const SquareLattice& lattice);

    const SquareLattice& lattice() const { return *lattice_; }
    std::size_t num_qubits() const { return lattice_->num_qubits(); }

    // V_j = Z on vertex qubit j.
    const PauliString& vertex_op(uint32_t vertex) const { return vertex_ops_.at(vertex); }
    const std::vector<PauliString>& vertex_ops() const { return vertex_ops_; }

    // E_ij along the edge arrow (i = tail, j = head), including the current
    // sign. edge_op_reversed gives E_ji = -E_ij.
    const PauliString& edge_op(uint32_t edge_id) const { return edge_ops_.at(edge_id); }
    PauliString edge_op_reversed(uint32_t edge_id) const;
    const std::vector<PauliString>& edge_ops() const { return edge_ops_; }
    int edge_sign(uint32_t edge_id) const { return edge_ops_.at(edge_id).sign(); }

    // S_k for red face ordinal k: the clockwise product of the face's edge
    // operators, starting from the upper-left corner.
    const PauliString& stabilizer(uint32_t k) const { return stabilizers_.at(k); }
    const std::vector<PauliString>& stabilizers() const { return stabilizers_; }
    // Face-qubit restriction T_k and vertex-qubit restriction R_k.
    const PauliString& face_part(uint32_t k) const { return face_parts_.at(k); }
    const PauliString& vertex_part(uint32_t k) const { return vertex_parts_.at(k); }

    // Destabilizers of the independent stabilizer prefix S_0 .. S_{m-2}; the
    // product of all plaquettes is trivial, so the last syndrome entry is
    // determined by the others.
    const std::vector<PauliString>& destabilizers() const { return destabilizers_; }

    // Flips the sign of every edge operator that anticommutes with the
    // recovery operator of `syndrome` (one +/-1 entry per stabilizer).
    void update_edge_signs(const std::vector<int>& syndrome);

    // Text listing of all operators with signs.
    std::string to_text() const;

  private:
    const SquareLattice* lattice_ = nullptr;
    std::vector<PauliString> vertex_ops_;
    std::vector<PauliString> edge_ops_;
    std::vector<PauliString> stabilizers_;
    std::vector<PauliString> face_parts_;
    std::vector<PauliString> vertex_parts_;
    std::vector<PauliString> destabilizers_;

    void check_invariants() const;
};

DkArtifacts build_dk_artifacts(const SquareLattice& lattice);

// Encodes one term under DK using the artifact's current edge signs.
EncodedTerm dk_encode(const FermiHubbardTerm& term, const DkArtifacts& artifacts);

void update_edge_signs(DkArtifacts& artifacts, const std::vector<int>& syndrome);

}  // namespace fermistab
