#pragma once

#include <cstdint>
#include <vector>

#include "fermistab/lattice.hpp"
#include "fermistab/pauli.hpp"

namespace fermistab {

enum class TermKind { Hopping, Coulomb, Number };

// A single Hamiltonian term. Hopping and Coulomb terms live on a lattice
// edge; `sites` holds (tail, head) vertex ids of that edge. Number terms use
// only `sites[0]`.
struct FermiHubbardTerm {
    TermKind kind = TermKind::Hopping;
    std::array<uint32_t, 2> sites{0, 0};
    uint32_t edge_id = UINT32_MAX;  // valid for hopping/coulomb
};

// The spinless Fermi-Hubbard model on a periodic L x L lattice:
//   H = -t sum_<ij> (a_i^dag a_j + h.c.) + U sum_<ij> n_i n_j.
// The coefficients only scale rotation angles; since all simulated rotations
// are snapped to Clifford angles they are carried as metadata.
struct FermiHubbardModel {
    const SquareLattice* lattice = nullptr;
    double t_hop = 1.0;
    double u_coulomb = 1.0;
    std::vector<FermiHubbardTerm> terms;  // all hoppings (by edge id), then all coulombs
};

FermiHubbardModel build_model(const SquareLattice& lattice, double t_hop = 1.0,
                              double u_coulomb = 1.0);

// One Hermitian Pauli summand of an encoded term. `pauli` carries no phase
// (exponent 0); the sign lives in `coefficient`.
struct EncodedSummand {
    double coefficient = 0.0;
    PauliString pauli;
};

// An encoded Hamiltonian term: a real combination of Pauli strings.
// `grouping[k]` tags summands by support: summands sharing a tag act on the
// same qubit support; distinct tags within one term have disjoint supports.
// Identity summands (pure energy shifts) get tag -1.
struct EncodedTerm {
    FermiHubbardTerm term;
    std::vector<EncodedSummand> summands;
    std::vector<int> grouping;
};

// Fills `grouping` from the summand supports (see EncodedTerm).
void tag_summand_groups(EncodedTerm& term);

// Folds the phase of `p` (an exact multiply() product, possibly imaginary)
// times i^extra_quarter_turns into a real coefficient scale * (+1/-1).
// Throws if the combined phase is imaginary.
EncodedSummand real_summand(PauliString p, double scale, int extra_quarter_turns = 0);

// Builds the standard encoded terms from a Majorana basis: majoranas[2j] and
// majoranas[2j+1] belong to mode j. Works for any encoding that supplies
// explicit Majorana strings (JW, TT).
//   hopping(i,j)  = (i/2)(g_2i g_{2j+1} + g_2j g_{2i+1})
//   number(j)     = (1/2)(I - V_j),          V_j = -i g_2j g_{2j+1}
//   coulomb(i,j)  = (1/4)(I - V_i - V_j + V_i V_j)
EncodedTerm encode_from_majoranas(const FermiHubbardTerm& term,
                                  const std::vector<PauliString>& majoranas);

}  // namespace fermistab
