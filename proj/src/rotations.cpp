#include "fermistab/rotations.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fermistab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Central phase gate S^k on `q` for k in {1,2,3}; k == 0 emits nothing.
void append_z_power(Circuit& c, uint32_t q, int k) {
    switch (k & 3) {
        case 0: break;
        case 1: c.append(Op::S, {q}); break;
        case 2: c.append(Op::Z, {q}); break;
        case 3: c.append(Op::S_DAG, {q}); break;
    }
}

}  // namespace

int angle_eighths_from_radians(double angle) {
    double turns = angle / (kPi / 4.0);
    double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-9) {
        throw std::invalid_argument(
            "logical rotations must be Clifford: the angle has to be a multiple of pi/4");
    }
    return static_cast<int>(rounded);
}

void append_pauli_rotation(Circuit& c, const PauliString& p, int angle_eighths) {
    if (p.weight() == 0) {
        throw std::invalid_argument("rotation requires a Pauli of weight >= 1");
    }
    int k = angle_eighths % 4;
    if (k < 0) k += 4;
    if (p.sign() < 0) k = (4 - k) & 3;  // exp(-i a (-P)) = exp(-i (-a) P)
    if (k == 0) return;                 // whole turns are global phases

    std::vector<uint32_t> support;
    int non_z = 0;
    for (std::size_t q = 0; q < p.num_qubits(); ++q) {
        char l = p.letter(q);
        if (l == 'I') continue;
        support.push_back(static_cast<uint32_t>(q));
        if (l != 'Z') ++non_z;
    }

    // Basis layer: conjugate every letter to Z. SQRT_Y maps X -> -Z (one
    // minus sign per X letter), SQRT_X_DAG would map Y -> -Z, so Y letters
    // use SQRT_X whose inverse sends Z -> Y with a plus sign.
    for (uint32_t q : support) {
        char l = p.letter(q);
        if (l == 'X') c.append(Op::SQRT_Y, {q});
        else if (l == 'Y') c.append(Op::SQRT_X, {q});
    }
    int x_letters = 0;
    for (uint32_t q : support) {
        if (p.letter(q) == 'X') ++x_letters;
    }

    uint32_t root = support.front();
    for (std::size_t i = 1; i < support.size(); ++i) {
        c.append(Op::CX, {support[i], root});
    }

    // The basis layer turned P into (-1)^{#X} Z...Z, so the central phase
    // exponent absorbs that sign.
    int central = ((x_letters & 1) ? (4 - k) & 3 : k);
    append_z_power(c, root, central);

    for (std::size_t i = support.size(); i-- > 1;) {
        c.append(Op::CX, {support[i], root});
    }
    for (std::size_t i = support.size(); i-- > 0;) {
        uint32_t q = support[i];
        char l = p.letter(q);
        if (l == 'X') c.append(Op::SQRT_Y_DAG, {q});
        else if (l == 'Y') c.append(Op::SQRT_X_DAG, {q});
    }
}

void append_summand_rotation(Circuit& c, const EncodedSummand& s, int angle_eighths) {
    if (s.pauli.is_identity()) return;
    if (s.pauli.phase_exponent() != 0) {
        throw std::invalid_argument("encoded summands carry their sign in the coefficient");
    }
    int k = angle_eighths;
    if (s.coefficient < 0) k = -k;
    append_pauli_rotation(c, s.pauli, k);
}

void append_term_rotations(Circuit& c, const EncodedTerm& term, int angle_eighths) {
    for (const auto& s : term.summands) {
        append_summand_rotation(c, s, angle_eighths);
    }
}

void append_pauli_gates(Circuit& c, const PauliString& p) {
    for (std::size_t q = 0; q < p.num_qubits(); ++q) {
        switch (p.letter(q)) {
            case 'X': c.append(Op::X, {static_cast<uint32_t>(q)}); break;
            case 'Y': c.append(Op::Y, {static_cast<uint32_t>(q)}); break;
            case 'Z': c.append(Op::Z, {static_cast<uint32_t>(q)}); break;
            default: break;
        }
    }
}

}  // namespace fermistab
