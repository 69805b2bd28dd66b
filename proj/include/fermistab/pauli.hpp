#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fermistab {

// A Pauli operator on n qubits with a global phase i^k, k in {0,1,2,3}.
// Qubit q carries the letter encoded by the bit pair (x_q, z_q):
//   (0,0) = I, (1,0) = X, (1,1) = Y, (0,1) = Z.
// The represented operator is i^phase_exponent * (tensor product of letters).
// Hermitian Pauli strings have phase_exponent 0 or 2 (sign +1 / -1).
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits);

    // Parses e.g. "XIZ", "-XX", "+iYZ", "-iZ". Length after the prefix fixes n.
    static PauliString from_string(const std::string& text);

    // Convenience: identity with a single letter placed at `qubit`.
    static PauliString single(std::size_t num_qubits, std::size_t qubit, char letter);

    std::size_t num_qubits() const { return n_; }

    bool x(std::size_t q) const;
    bool z(std::size_t q) const;
    void set_x(std::size_t q, bool v);
    void set_z(std::size_t q, bool v);

    // Letter access: 'I', 'X', 'Y' or 'Z'.
    char letter(std::size_t q) const;
    void set_letter(std::size_t q, char letter);

    // Phase exponent k of i^k.
    int phase_exponent() const { return phase_; }
    void set_phase_exponent(int k);
    // Sign for Hermitian strings: +1 or -1. Throws if the phase is imaginary.
    int sign() const;
    void negate() { phase_ = (phase_ + 2) & 3; }

    std::size_t weight() const;
    bool is_identity() const;  // ignores phase

    // Keeps letters on `qubits`, identity elsewhere. Phase preserved.
    PauliString restricted_to(const std::vector<std::size_t>& qubits) const;

    std::string to_string() const;

    bool operator==(const PauliString& other) const;
    bool operator!=(const PauliString& other) const { return !(*this == other); }

    // Ordering on (n, letters, phase) so PauliStrings can key maps/sets.
    bool operator<(const PauliString& other) const;

    friend PauliString multiply(const PauliString& a, const PauliString& b);
    friend bool commutes(const PauliString& a, const PauliString& b);

    const std::vector<uint64_t>& x_words() const { return x_; }
    const std::vector<uint64_t>& z_words() const { return z_; }

  private:
    std::size_t n_ = 0;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    int phase_ = 0;
};

// Product a*b with exact phase tracking.
PauliString multiply(const PauliString& a, const PauliString& b);

// True iff a and b commute (phases are irrelevant).
bool commutes(const PauliString& a, const PauliString& b);

// A list of Pauli generators with GF(2) helpers.
class GeneratorSet {
  public:
    GeneratorSet() = default;
    explicit GeneratorSet(std::vector<PauliString> generators);

    const std::vector<PauliString>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }
    std::size_t num_qubits() const;

    bool mutually_commuting() const;
    // True iff the generators are independent over GF(2) (phases ignored).
    bool independent() const;

    // Membership of p in the group generated by the generators, phases ignored.
    bool contains_up_to_phase(const PauliString& p) const;

  private:
    std::vector<PauliString> gens_;
};

// For independent commuting generators S_1..S_m on n qubits, returns
// D_1..D_m with: D_i anticommutes with S_i, commutes with all S_j (j != i),
// all returned with +1 phase. Solved over GF(2) with lowest-index pivots.
std::vector<PauliString> compute_destabilizers(const std::vector<PauliString>& gens);

// Product of destabilizers selected by a -1 syndrome entry; flips exactly the
// generators whose syndrome entry is -1.
PauliString recovery_from_syndrome(const std::vector<PauliString>& destabilizers,
                                   const std::vector<int>& syndrome);

}  // namespace fermistab
