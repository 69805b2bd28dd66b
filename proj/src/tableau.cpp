#include "fermistab/tableau.hpp"

#include <array>
#include <cassert>
#include <stdexcept>

namespace fermistab {

TableauSimulator::TableauSimulator(std::size_t num_qubits, std::uint64_t seed)
    : n_(num_qubits),
      wpr_((num_qubits + 63) / 64),
      x_(2 * num_qubits * ((num_qubits + 63) / 64), 0),
      z_(2 * num_qubits * ((num_qubits + 63) / 64), 0),
      sign_(2 * num_qubits, 0),
      rng_(seed) {
    for (std::size_t i = 0; i < n_; ++i) {
        set_xbit(i, i, true);        // destabilizer i = X_i
        set_zbit(n_ + i, i, true);   // stabilizer i = Z_i
    }
}

bool TableauSimulator::xbit(std::size_t row, std::size_t q) const {
    return (x_[row * wpr_ + q / 64] >> (q % 64)) & 1;
}
bool TableauSimulator::zbit(std::size_t row, std::size_t q) const {
    return (z_[row * wpr_ + q / 64] >> (q % 64)) & 1;
}
void TableauSimulator::set_xbit(std::size_t row, std::size_t q, bool v) {
    uint64_t m = uint64_t{1} << (q % 64);
    auto& w = x_[row * wpr_ + q / 64];
    w = v ? (w | m) : (w & ~m);
}
void TableauSimulator::set_zbit(std::size_t row, std::size_t q, bool v) {
    uint64_t m = uint64_t{1} << (q % 64);
    auto& w = z_[row * wpr_ + q / 64];
    w = v ? (w | m) : (w & ~m);
}

PauliString TableauSimulator::row_to_pauli(std::size_t row) const {
    PauliString p(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        p.set_x(q, xbit(row, q));
        p.set_z(q, zbit(row, q));
    }
    p.set_phase_exponent(sign_[row] ? 2 : 0);
    return p;
}

void TableauSimulator::rowsum(std::size_t h, std::size_t i) {
    // Phase exponent of i in (row_i * row_h), accumulated mod 4.
    int t = 2 * sign_[h] + 2 * sign_[i];
    for (std::size_t q = 0; q < n_; ++q) {
        int x1 = xbit(i, q), z1 = zbit(i, q);
        int x2 = xbit(h, q), z2 = zbit(h, q);
        if (x1 == 0 && z1 == 0) continue;
        if (x1 == 1 && z1 == 1) t += z2 - x2;
        else if (x1 == 1) t += z2 * (2 * x2 - 1);
        else t += x2 * (1 - 2 * z2);
    }
    t = ((t % 4) + 4) % 4;
    assert(t == 0 || t == 2);
    sign_[h] = static_cast<uint8_t>(t == 2);
    for (std::size_t w = 0; w < wpr_; ++w) {
        x_[h * wpr_ + w] ^= x_[i * wpr_ + w];
        z_[h * wpr_ + w] ^= z_[i * wpr_ + w];
    }
}

void TableauSimulator::apply_gate(Op op, uint32_t a) {
    if (!is_single_qubit_gate(op)) throw std::invalid_argument("not a 1q gate");
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        bool x = xbit(r, a), z = zbit(r, a);
        switch (op) {
            case Op::H:
                sign_[r] ^= static_cast<uint8_t>(x && z);
                set_xbit(r, a, z);
                set_zbit(r, a, x);
                break;
            case Op::S:
                sign_[r] ^= static_cast<uint8_t>(x && z);
                set_zbit(r, a, z ^ x);
                break;
            case Op::S_DAG:
                sign_[r] ^= static_cast<uint8_t>(x && !z);
                set_zbit(r, a, z ^ x);
                break;
            case Op::SQRT_X:
                sign_[r] ^= static_cast<uint8_t>(z && !x);
                set_xbit(r, a, x ^ z);
                break;
            case Op::SQRT_X_DAG:
                sign_[r] ^= static_cast<uint8_t>(x && z);
                set_xbit(r, a, x ^ z);
                break;
            case Op::SQRT_Y:
                sign_[r] ^= static_cast<uint8_t>(x && !z);
                set_xbit(r, a, z);
                set_zbit(r, a, x);
                break;
            case Op::SQRT_Y_DAG:
                sign_[r] ^= static_cast<uint8_t>(z && !x);
                set_xbit(r, a, z);
                set_zbit(r, a, x);
                break;
            case Op::X:
                sign_[r] ^= static_cast<uint8_t>(z);
                break;
            case Op::Y:
                sign_[r] ^= static_cast<uint8_t>(x ^ z);
                break;
            case Op::Z:
                sign_[r] ^= static_cast<uint8_t>(x);
                break;
            default:
                throw std::invalid_argument("unhandled 1q gate");
        }
    }
}

void TableauSimulator::apply_gate(Op op, uint32_t a, uint32_t b) {
    if (!is_two_qubit_gate(op)) throw std::invalid_argument("not a 2q gate");
    if (op == Op::CY) {
        apply_gate(Op::S_DAG, b);
        apply_gate(Op::CX, a, b);
        apply_gate(Op::S, b);
        return;
    }
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        bool xa = xbit(r, a), za = zbit(r, a);
        bool xb = xbit(r, b), zb = zbit(r, b);
        switch (op) {
            case Op::CX:  // a = control, b = target
                sign_[r] ^= static_cast<uint8_t>(xa && zb && !(xb ^ za));
                set_xbit(r, b, xb ^ xa);
                set_zbit(r, a, za ^ zb);
                break;
            case Op::CZ:
                sign_[r] ^= static_cast<uint8_t>(xa && xb && (za ^ zb));
                set_zbit(r, a, za ^ xb);
                set_zbit(r, b, zb ^ xa);
                break;
            case Op::SWAP:
                set_xbit(r, a, xb);
                set_zbit(r, a, zb);
                set_xbit(r, b, xa);
                set_zbit(r, b, za);
                break;
            default:
                throw std::invalid_argument("unhandled 2q gate");
        }
    }
}

void TableauSimulator::apply_pauli(const PauliString& p) {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    for (std::size_t q = 0; q < n_; ++q) {
        switch (p.letter(q)) {
            case 'X': apply_gate(Op::X, static_cast<uint32_t>(q)); break;
            case 'Y': apply_gate(Op::Y, static_cast<uint32_t>(q)); break;
            case 'Z': apply_gate(Op::Z, static_cast<uint32_t>(q)); break;
            default: break;
        }
    }
}

TableauSimulator::MeasureResult TableauSimulator::measure_z(uint32_t q,
                                                            std::optional<bool> force) {
    std::size_t p = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (xbit(r, q)) { p = r; break; }
    }
    if (p < 2 * n_) {
        // Random outcome: collapse onto +-Z_q.
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            if (r != p && xbit(r, q)) rowsum(r, p);
        }
        MeasureResult res;
        res.random = true;
        res.collapse = row_to_pauli(p);
        res.outcome = force ? *force : static_cast<bool>(rng_() & 1);
        // Old stabilizer row becomes the destabilizer of the new Z_q row.
        std::size_t d = p - n_;
        for (std::size_t w = 0; w < wpr_; ++w) {
            x_[d * wpr_ + w] = x_[p * wpr_ + w];
            z_[d * wpr_ + w] = z_[p * wpr_ + w];
            x_[p * wpr_ + w] = 0;
            z_[p * wpr_ + w] = 0;
        }
        sign_[d] = sign_[p];
        set_zbit(p, q, true);
        sign_[p] = static_cast<uint8_t>(res.outcome);
        return res;
    }
    // Deterministic outcome: +-Z_q is a product of stabilizer rows selected by
    // the destabilizer rows that contain X_q.
    PauliString acc(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (xbit(i, q)) acc = multiply(row_to_pauli(n_ + i), acc);
    }
    assert(acc.weight() == 1 && acc.letter(q) == 'Z');
    MeasureResult res;
    res.random = false;
    res.outcome = acc.phase_exponent() == 2;
    return res;
}

TableauSimulator::MeasureResult TableauSimulator::reset(uint32_t q,
                                                        std::optional<bool> force) {
    MeasureResult res = measure_z(q, force);
    if (res.outcome) apply_gate(Op::X, q);
    return res;
}

std::optional<int> TableauSimulator::expectation(const PauliString& p) const {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli size mismatch");
    if (p.phase_exponent() % 2 != 0) throw std::invalid_argument("pauli must be Hermitian");
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (!commutes(row_to_pauli(r), p)) return std::nullopt;
    }
    PauliString acc(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (!commutes(row_to_pauli(i), p)) acc = multiply(row_to_pauli(n_ + i), acc);
    }
    PauliString target = p;
    target.set_phase_exponent(0);
    PauliString got = acc;
    got.set_phase_exponent(0);
    assert(got == target);
    int diff = ((acc.phase_exponent() - p.phase_exponent()) % 4 + 4) % 4;
    assert(diff == 0 || diff == 2);
    return diff == 0 ? 1 : -1;
}

std::vector<PauliString> TableauSimulator::stabilizers() const {
    std::vector<PauliString> out;
    out.reserve(n_);
    for (std::size_t r = n_; r < 2 * n_; ++r) out.push_back(row_to_pauli(r));
    return out;
}

std::vector<PauliString> TableauSimulator::destabilizers() const {
    std::vector<PauliString> out;
    out.reserve(n_);
    for (std::size_t r = 0; r < n_; ++r) out.push_back(row_to_pauli(r));
    return out;
}

ReferenceRun run_reference(const Circuit& c) {
    TableauSimulator sim(c.num_qubits);
    ReferenceRun run;
    std::vector<bool>& records = run.records;
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        if (is_noise(ins.op) || (ins.op == Op::M && ins.arg != 0.0)) {
            throw std::invalid_argument("run_reference requires a noise-free circuit");
        }
        switch (ins.op) {
            case Op::M:
                for (std::size_t t = 0; t < ins.targets.size(); ++t) {
                    auto res = sim.measure_z(ins.targets[t], false);
                    if (res.random) {
                        CollapsePoint cp;
                        cp.instruction_index = i;
                        cp.target_offset = t;
                        cp.record_index = records.size();
                        cp.frame = res.collapse;
                        run.collapses.push_back(std::move(cp));
                    }
                    records.push_back(res.outcome);
                }
                break;
            case Op::R:
                for (std::size_t t = 0; t < ins.targets.size(); ++t) {
                    auto res = sim.reset(ins.targets[t], false);
                    if (res.random) {
                        // Branches differ by X_q * collapse after the reset;
                        // the X_q part cancels against the reset correction.
                        CollapsePoint cp;
                        cp.instruction_index = i;
                        cp.target_offset = t;
                        cp.frame = res.collapse;
                        cp.frame.set_x(ins.targets[t], false);
                        cp.frame.set_phase_exponent(0);
                        run.collapses.push_back(std::move(cp));
                    }
                }
                break;
            case Op::DETECTOR: {
                bool v = false;
                for (uint32_t k : ins.targets) v = v ^ records[records.size() - k];
                run.detector_values.push_back(v);
                break;
            }
            case Op::OBSERVABLE_INCLUDE: {
                std::size_t idx = static_cast<std::size_t>(ins.arg);
                if (run.observable_values.size() <= idx) {
                    run.observable_values.resize(idx + 1, false);
                }
                bool v = run.observable_values[idx];
                for (uint32_t k : ins.targets) v = v ^ records[records.size() - k];
                run.observable_values[idx] = v;
                break;
            }
            default:
                if (is_single_qubit_gate(ins.op)) {
                    for (uint32_t q : ins.targets) sim.apply_gate(ins.op, q);
                } else {
                    for (std::size_t t = 0; t + 1 < ins.targets.size(); t += 2) {
                        sim.apply_gate(ins.op, ins.targets[t], ins.targets[t + 1]);
                    }
                }
        }
    }
    run.num_measurements = records.size();
    return run;
}

std::vector<bool> propagate_frame(const Circuit& c, std::size_t instruction_index,
                                  std::size_t target_offset, const PauliString& frame) {
    std::size_t total = c.count_measurements();
    std::vector<bool> flips(total, false);
    std::vector<uint8_t> fx(c.num_qubits, 0), fz(c.num_qubits, 0);
    for (std::size_t q = 0; q < frame.num_qubits() && q < c.num_qubits; ++q) {
        fx[q] = frame.x(q);
        fz[q] = frame.z(q);
    }
    // Measurement records consumed before the injection point.
    std::size_t rec = 0;
    for (std::size_t i = 0; i < instruction_index && i < c.instructions.size(); ++i) {
        if (c.instructions[i].op == Op::M) rec += c.instructions[i].targets.size();
    }
    for (std::size_t i = instruction_index; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        std::size_t start = (i == instruction_index) ? target_offset : 0;
        if (ins.op == Op::M && i == instruction_index) rec += start;
        switch (ins.op) {
            case Op::M:
                for (std::size_t t = start; t < ins.targets.size(); ++t) {
                    if (fx[ins.targets[t]]) flips[rec + (t - start)] = true;
                }
                rec += ins.targets.size() - start;
                break;
            case Op::R:
                for (std::size_t t = start; t < ins.targets.size(); ++t) {
                    fx[ins.targets[t]] = 0;
                    fz[ins.targets[t]] = 0;
                }
                break;
            case Op::H:
            case Op::SQRT_Y:
            case Op::SQRT_Y_DAG:
                for (std::size_t t = start; t < ins.targets.size(); ++t) {
                    std::swap(fx[ins.targets[t]], fz[ins.targets[t]]);
                }
                break;
            case Op::S:
            case Op::S_DAG:
                for (std::size_t t = start; t < ins.targets.size(); ++t) {
                    fz[ins.targets[t]] ^= fx[ins.targets[t]];
                }
                break;
            case Op::SQRT_X:
            case Op::SQRT_X_DAG:
                for (std::size_t t = start; t < ins.targets.size(); ++t) {
                    fx[ins.targets[t]] ^= fz[ins.targets[t]];
                }
                break;
            case Op::X:
            case Op::Y:
            case Op::Z:
            case Op::DEPOLARIZE1:
            case Op::DEPOLARIZE2:
            case Op::X_ERROR:
            case Op::DETECTOR:
            case Op::OBSERVABLE_INCLUDE:
                break;
            case Op::CX:
                for (std::size_t t = 2 * start; t + 1 < ins.targets.size(); t += 2) {
                    uint32_t a = ins.targets[t], b = ins.targets[t + 1];
                    fx[b] ^= fx[a];
                    fz[a] ^= fz[b];
                }
                break;
            case Op::CZ:
                for (std::size_t t = 2 * start; t + 1 < ins.targets.size(); t += 2) {
                    uint32_t a = ins.targets[t], b = ins.targets[t + 1];
                    fz[a] ^= fx[b];
                    fz[b] ^= fx[a];
                }
                break;
            case Op::CY:
                for (std::size_t t = 2 * start; t + 1 < ins.targets.size(); t += 2) {
                    uint32_t a = ins.targets[t], b = ins.targets[t + 1];
                    uint8_t za = fz[a] ^ fx[b] ^ fz[b];
                    uint8_t xb = fx[b] ^ fx[a];
                    uint8_t zb = fz[b] ^ fx[a];
                    fz[a] = za;
                    fx[b] = xb;
                    fz[b] = zb;
                }
                break;
            case Op::SWAP:
                for (std::size_t t = 2 * start; t + 1 < ins.targets.size(); t += 2) {
                    uint32_t a = ins.targets[t], b = ins.targets[t + 1];
                    std::swap(fx[a], fx[b]);
                    std::swap(fz[a], fz[b]);
                }
                break;
        }
    }
    return flips;
}

namespace {

// Images of the single-qubit letters under G P G^dag, as (letter, sign).
struct LetterImage {
    char letter;
    int sign;
};

// idx: I=0, X=1, Y=2, Z=3.
int letter_index(char l) {
    switch (l) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
        default: throw std::logic_error("invalid Pauli letter");
    }
}

const std::array<LetterImage, 4>* one_qubit_conjugation(Op op) {
    static const std::array<LetterImage, 4> h = {{{'I', 1}, {'Z', 1}, {'Y', -1}, {'X', 1}}};
    static const std::array<LetterImage, 4> s = {{{'I', 1}, {'Y', 1}, {'X', -1}, {'Z', 1}}};
    static const std::array<LetterImage, 4> sdg = {{{'I', 1}, {'Y', -1}, {'X', 1}, {'Z', 1}}};
    static const std::array<LetterImage, 4> sx = {{{'I', 1}, {'X', 1}, {'Z', 1}, {'Y', -1}}};
    static const std::array<LetterImage, 4> sxdg = {{{'I', 1}, {'X', 1}, {'Z', -1}, {'Y', 1}}};
    static const std::array<LetterImage, 4> sy = {{{'I', 1}, {'Z', -1}, {'Y', 1}, {'X', 1}}};
    static const std::array<LetterImage, 4> sydg = {{{'I', 1}, {'Z', 1}, {'Y', 1}, {'X', -1}}};
    static const std::array<LetterImage, 4> px = {{{'I', 1}, {'X', 1}, {'Y', -1}, {'Z', -1}}};
    static const std::array<LetterImage, 4> py = {{{'I', 1}, {'X', -1}, {'Y', 1}, {'Z', -1}}};
    static const std::array<LetterImage, 4> pz = {{{'I', 1}, {'X', -1}, {'Y', -1}, {'Z', 1}}};
    switch (op) {
        case Op::H: return &h;
        case Op::S: return &s;
        case Op::S_DAG: return &sdg;
        case Op::SQRT_X: return &sx;
        case Op::SQRT_X_DAG: return &sxdg;
        case Op::SQRT_Y: return &sy;
        case Op::SQRT_Y_DAG: return &sydg;
        case Op::X: return &px;
        case Op::Y: return &py;
        case Op::Z: return &pz;
        default: return nullptr;
    }
}

struct PairImage {
    char la;
    char lb;
    int sign;
};

// Build the 16-entry pair table from the images of X_a, Z_a, X_b, Z_b
// (two-letter strings, all with sign +1 for the supported gates).
std::array<PairImage, 16> build_pair_table(const char* xa, const char* za,
                                           const char* xb, const char* zb) {
    auto make = [](const char* s) {
        PauliString p(2);
        p.set_letter(0, s[0]);
        p.set_letter(1, s[1]);
        return p;
    };
    const PauliString gen[4] = {make(xa), make(za), make(xb), make(zb)};
    std::array<PairImage, 16> table{};
    for (int ia = 0; ia < 4; ++ia) {
        for (int ib = 0; ib < 4; ++ib) {
            const char la = "IXYZ"[ia];
            const char lb = "IXYZ"[ib];
            // Decompose the input pair as i^{#Y} X_a^xa Z_a^za X_b^xb Z_b^zb
            // and multiply the generator images in the same order.
            bool bits[4] = {la == 'X' || la == 'Y', la == 'Z' || la == 'Y',
                            lb == 'X' || lb == 'Y', lb == 'Z' || lb == 'Y'};
            int phase = (la == 'Y' ? 1 : 0) + (lb == 'Y' ? 1 : 0);
            PauliString acc(2);
            for (int g = 0; g < 4; ++g) {
                if (bits[g]) acc = multiply(acc, gen[g]);
            }
            acc.set_phase_exponent((acc.phase_exponent() + phase) % 4);
            table[ia * 4 + ib] = PairImage{acc.letter(0), acc.letter(1), acc.sign()};
        }
    }
    return table;
}

const std::array<PairImage, 16>* two_qubit_conjugation(Op op) {
    static const std::array<PairImage, 16> cx = build_pair_table("XX", "ZI", "IX", "ZZ");
    static const std::array<PairImage, 16> cz = build_pair_table("XZ", "ZI", "ZX", "IZ");
    static const std::array<PairImage, 16> cy = build_pair_table("XY", "ZI", "ZX", "ZZ");
    static const std::array<PairImage, 16> swp = build_pair_table("IX", "IZ", "XI", "ZI");
    switch (op) {
        case Op::CX: return &cx;
        case Op::CZ: return &cz;
        case Op::CY: return &cy;
        case Op::SWAP: return &swp;
        default: return nullptr;
    }
}

}  // namespace

PauliString conjugate_through(const Circuit& c, std::size_t begin, std::size_t end,
                              PauliString p) {
    if (p.num_qubits() != c.num_qubits) {
        throw std::invalid_argument("conjugate_through: Pauli size does not match circuit");
    }
    int sign = 1;
    for (std::size_t i = begin; i < end && i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        if (is_annotation(ins.op)) continue;
        if (!is_unitary(ins.op)) {
            throw std::invalid_argument(
                "conjugate_through requires a unitary instruction span");
        }
        if (const auto* t1 = one_qubit_conjugation(ins.op)) {
            for (uint32_t q : ins.targets) {
                const LetterImage& img = (*t1)[letter_index(p.letter(q))];
                p.set_letter(q, img.letter);
                sign *= img.sign;
            }
        } else if (const auto* t2 = two_qubit_conjugation(ins.op)) {
            for (std::size_t t = 0; t + 1 < ins.targets.size(); t += 2) {
                uint32_t a = ins.targets[t];
                uint32_t b = ins.targets[t + 1];
                const PairImage& img =
                    (*t2)[letter_index(p.letter(a)) * 4 + letter_index(p.letter(b))];
                p.set_letter(a, img.la);
                p.set_letter(b, img.lb);
                sign *= img.sign;
            }
        } else {
            throw std::logic_error("conjugate_through: unhandled unitary op");
        }
    }
    if (sign < 0) p.set_phase_exponent((p.phase_exponent() + 2) % 4);
    return p;
}

ParitySets collect_parity_sets(const Circuit& c) {
    ParitySets out;
    std::size_t rec = 0;
    for (const Instruction& ins : c.instructions) {
        if (ins.op == Op::M) {
            rec += ins.targets.size();
        } else if (ins.op == Op::DETECTOR) {
            std::vector<std::size_t> set;
            for (uint32_t k : ins.targets) set.push_back(rec - k);
            out.detectors.push_back(std::move(set));
        } else if (ins.op == Op::OBSERVABLE_INCLUDE) {
            std::size_t idx = static_cast<std::size_t>(ins.arg);
            if (out.observables.size() <= idx) out.observables.resize(idx + 1);
            for (uint32_t k : ins.targets) out.observables[idx].push_back(rec - k);
        }
    }
    return out;
}

DeterminismReport check_determinism(const Circuit& c) {
    ReferenceRun run = run_reference(c);
    ParitySets sets = collect_parity_sets(c);
    DeterminismReport report;
    for (const CollapsePoint& cp : run.collapses) {
        std::vector<bool> flips =
            propagate_frame(c, cp.instruction_index, cp.target_offset + 1, cp.frame);
        if (cp.record_index) flips[*cp.record_index] = !flips[*cp.record_index];
        auto odd = [&](const std::vector<std::size_t>& set) {
            bool v = false;
            for (std::size_t r : set) v = v ^ flips[r];
            return v;
        };
        for (std::size_t d = 0; d < sets.detectors.size(); ++d) {
            if (odd(sets.detectors[d])) {
                report.deterministic = false;
                report.detail = "detector " + std::to_string(d) +
                                " depends on the random branch of instruction " +
                                std::to_string(cp.instruction_index);
                return report;
            }
        }
        for (std::size_t o = 0; o < sets.observables.size(); ++o) {
            if (odd(sets.observables[o])) {
                report.deterministic = false;
                report.detail = "observable " + std::to_string(o) +
                                " depends on the random branch of instruction " +
                                std::to_string(cp.instruction_index);
                return report;
            }
        }
    }
    return report;
}

}  // namespace fermistab
