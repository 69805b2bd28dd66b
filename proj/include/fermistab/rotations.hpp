#pragma once

#include "fermistab/circuit.hpp"
#include "fermistab/model.hpp"
#include "fermistab/pauli.hpp"

namespace fermistab {

// Number of eighth-turns (multiples of pi/4) closest to `angle` radians.
// Throws std::invalid_argument when the angle is not a Clifford angle, i.e.
// not an exact multiple of pi/4 within a small tolerance.
int angle_eighths_from_radians(double angle);

// Appends a Clifford realization of exp(-i * (eighths * pi/4) * P) for a
// Hermitian Pauli P (sign +1/-1 folded into the angle), exact up to global
// phase:
//   - basis layer: SQRT_Y on X letters, SQRT_X on Y letters;
//   - CX star from every other support qubit onto the lowest-index one;
//   - central Z-power phase gate (S / Z / S_DAG) on the star root;
//   - mirrored star and inverse basis layer.
// Gate cost: 2Q = 2(w-1); 1Q = 2 * (#non-Z letters) + 1. A weight-1 Z
// rotation is a single phase gate. Rotations by a multiple of 2*pi (eighths
// divisible by 4) emit nothing. Throws for identity or imaginary-phase P.
void append_pauli_rotation(Circuit& c, const PauliString& p, int angle_eighths = 3);

// Rotation for one encoded summand: the sign of the coefficient multiplies
// the angle; the magnitude only scales the (snapped-away) continuous angle.
// Identity summands contribute a global phase and emit nothing.
void append_summand_rotation(Circuit& c, const EncodedSummand& s, int angle_eighths = 3);

// Rotations for every summand of an encoded term, in summand order.
void append_term_rotations(Circuit& c, const EncodedTerm& term, int angle_eighths = 3);

// Applies a Pauli string as X/Y/Z gates (phase ignored), ascending qubits.
void append_pauli_gates(Circuit& c, const PauliString& p);

}  // namespace fermistab
