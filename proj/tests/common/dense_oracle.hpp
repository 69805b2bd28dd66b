#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fermistab/circuit.hpp"
#include "fermistab/pauli.hpp"

// Dense linear-algebra oracles used only by tests. Qubit q is bit q of the
// basis index (qubit 0 least significant). For two-qubit gate matrices the
// first target is the high bit of the 4-dimensional basis.
namespace fermistab::dense {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix letter_matrix(char c) {
    Matrix m(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad letter");
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Matrix pauli_dense(const PauliString& p) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t q = p.num_qubits(); q-- > 0;) {
        out = kron(out, letter_matrix(p.letter(q)));
    }
    cplx phase(1, 0);
    for (int k = 0; k < p.phase_exponent(); ++k) phase *= cplx(0, 1);
    return phase * out;
}

// Unitaries for the gate set. Square roots follow exp(-i pi P / 4) up to
// global phase: sqrt(X) sends Z -> -Y, sqrt(Y) sends X -> -Z, S sends X -> Y.
inline Matrix gate_dense(Op op) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0, 1);
    Matrix m;
    switch (op) {
        case Op::H:
            m.resize(2, 2);
            m << s, s, s, -s;
            return m;
        case Op::S:
            m.resize(2, 2);
            m << 1, 0, 0, i;
            return m;
        case Op::S_DAG:
            m.resize(2, 2);
            m << 1, 0, 0, -i;
            return m;
        case Op::SQRT_X:
            m.resize(2, 2);
            m << s, -i * s, -i * s, s;
            return m;
        case Op::SQRT_X_DAG:
            m.resize(2, 2);
            m << s, i * s, i * s, s;
            return m;
        case Op::SQRT_Y:
            m.resize(2, 2);
            m << s, -s, s, s;
            return m;
        case Op::SQRT_Y_DAG:
            m.resize(2, 2);
            m << s, s, -s, s;
            return m;
        case Op::X:
            return letter_matrix('X');
        case Op::Y:
            return letter_matrix('Y');
        case Op::Z:
            return letter_matrix('Z');
        case Op::CX:
            m = Matrix::Zero(4, 4);
            m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
            return m;
        case Op::CZ:
            m = Matrix::Identity(4, 4);
            m(3, 3) = -1;
            return m;
        case Op::CY:
            m = Matrix::Zero(4, 4);
            m(0, 0) = m(1, 1) = 1;
            m(2, 3) = -i;
            m(3, 2) = i;
            return m;
        case Op::SWAP:
            m = Matrix::Zero(4, 4);
            m(0, 0) = m(3, 3) = m(1, 2) = m(2, 1) = 1;
            return m;
        default:
            throw std::invalid_argument("not a unitary gate");
    }
}

// Expands a 1- or 2-qubit unitary to the full 2^n space.
inline Matrix expand(const Matrix& u, const std::vector<uint32_t>& targets, std::size_t n) {
    std::size_t dim = std::size_t{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    if (targets.size() == 1) {
        std::size_t mask = std::size_t{1} << targets[0];
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t c = (col & mask) ? 1 : 0;
            for (std::size_t r = 0; r < 2; ++r) {
                std::size_t row = (col & ~mask) | (r ? mask : 0);
                out(row, col) += u(r, c);
            }
        }
        return out;
    }
    if (targets.size() == 2) {
        std::size_t ma = std::size_t{1} << targets[0];
        std::size_t mb = std::size_t{1} << targets[1];
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t c = ((col & ma) ? 2 : 0) | ((col & mb) ? 1 : 0);
            for (std::size_t r = 0; r < 4; ++r) {
                std::size_t row = (col & ~(ma | mb)) | ((r & 2) ? ma : 0) | ((r & 1) ? mb : 0);
                out(row, col) += u(r, c);
            }
        }
        return out;
    }
    throw std::invalid_argument("expand supports 1 or 2 targets");
}

// Full 2^n unitary of a purely unitary circuit; throws on anything else.
inline Matrix circuit_unitary(const Circuit& c, std::size_t n) {
    std::size_t dim = std::size_t{1} << n;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& ins : c.instructions) {
        if (is_annotation(ins.op)) continue;
        if (!is_unitary(ins.op)) throw std::invalid_argument("circuit_unitary: non-unitary op");
        Matrix g = gate_dense(ins.op);
        if (is_single_qubit_gate(ins.op)) {
            for (uint32_t t : ins.targets) u = expand(g, {t}, n) * u;
        } else {
            for (std::size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                u = expand(g, {ins.targets[i], ins.targets[i + 1]}, n) * u;
            }
        }
    }
    return u;
}

// True iff a == e^{i phi} b for some real phi.
inline bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol = 1e-9) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    cplx phase = 0.0;
    for (Eigen::Index i = 0; i < a.rows() && phase == 0.0; ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (std::abs(b(i, j)) > 1e-6) {
                phase = a(i, j) / b(i, j);
                break;
            }
        }
    }
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

// exp(-i * angle * P) for a Hermitian Pauli: cos(a) I - i sin(a) P.
inline Matrix rotation_dense(const PauliString& p, double angle) {
    std::size_t dim = std::size_t{1} << p.num_qubits();
    Matrix pd = pauli_dense(p);
    return std::cos(angle) * Matrix::Identity(dim, dim) - cplx(0, 1) * std::sin(angle) * pd;
}

// Pure-state simulator for noise-free circuits; measurements are projected
// onto caller-supplied outcomes.
class DenseSim {
  public:
    explicit DenseSim(std::size_t n) : n_(n), state_(Vector::Zero(std::size_t{1} << n)) {
        state_(0) = 1.0;
    }

    std::size_t num_qubits() const { return n_; }
    const Vector& state() const { return state_; }

    void apply(Op op, const std::vector<uint32_t>& targets) {
        Matrix u = gate_dense(op);
        for (std::size_t t = 0; t < targets.size(); t += u.rows() == 2 ? 1 : 2) {
            std::vector<uint32_t> tg(targets.begin() + t,
                                     targets.begin() + t + (u.rows() == 2 ? 1 : 2));
            state_ = expand(u, tg, n_) * state_;
        }
    }

    double prob_one(uint32_t q) const {
        double p = 0.0;
        std::size_t mask = std::size_t{1} << q;
        for (std::size_t b = 0; b < static_cast<std::size_t>(state_.size()); ++b) {
            if (b & mask) p += std::norm(state_(b));
        }
        return p;
    }

    // Projects qubit q onto `outcome` and renormalizes; returns the Born
    // probability of that outcome before projection.
    double project(uint32_t q, int outcome) {
        double p1 = prob_one(q);
        double p = outcome ? p1 : 1.0 - p1;
        if (p < 1e-12) throw std::runtime_error("projection onto zero-probability outcome");
        std::size_t mask = std::size_t{1} << q;
        for (std::size_t b = 0; b < static_cast<std::size_t>(state_.size()); ++b) {
            if (((b & mask) != 0) != (outcome != 0)) state_(b) = 0.0;
        }
        state_ /= std::sqrt(p);
        return p;
    }

    void reset(uint32_t q, int observed) {
        project(q, observed);
        if (observed) apply(Op::X, {q});
    }

    cplx expectation(const PauliString& p) const {
        return state_.dot(pauli_dense(p) * state_);  // dot conjugates the left side
    }

  private:
    std::size_t n_;
    Vector state_;
};

// Exact mixed-state evolution of a noisy circuit with full branching over
// measurement records. Exponential in the record count; for tiny circuits
// only.
struct ExactDistribution {
    std::vector<double> detector_rates;    // probability each detector is 1
    std::vector<double> observable_rates;  // probability each observable is 1
    std::vector<double> record_rates;      // probability each raw record is 1
};

class DensityOracle {
  public:
    explicit DensityOracle(std::size_t n) : n_(n) {}

    ExactDistribution run(const Circuit& c) const {
        std::size_t dim = std::size_t{1} << n_;
        struct Branch {
            Matrix rho;
            std::vector<uint8_t> rec;
        };
        std::vector<Branch> branches;
        Matrix rho0 = Matrix::Zero(dim, dim);
        rho0(0, 0) = 1.0;
        branches.push_back({rho0, {}});

        std::vector<std::vector<std::size_t>> detector_sets;
        std::vector<std::vector<std::size_t>> observable_sets;
        std::size_t num_records = 0;

        auto conjugate_all = [&](const Matrix& u) {
            for (Branch& b : branches) b.rho = u * b.rho * u.adjoint();
        };

        for (const Instruction& ins : c.instructions) {
            const auto& tg = ins.targets;
            switch (ins.op) {
                case Op::DETECTOR: {
                    std::vector<std::size_t> set;
                    for (uint32_t k : tg) set.push_back(num_records - k);
                    detector_sets.push_back(std::move(set));
                    break;
                }
                case Op::OBSERVABLE_INCLUDE: {
                    std::size_t idx = static_cast<std::size_t>(ins.arg);
                    if (observable_sets.size() <= idx) observable_sets.resize(idx + 1);
                    for (uint32_t k : tg) {
                        observable_sets[idx].push_back(num_records - k);
                    }
                    break;
                }
                case Op::M: {
                    for (uint32_t q : tg) {
                        Matrix p0 = projector(q, 0), p1 = projector(q, 1);
                        std::vector<Branch> next;
                        for (Branch& b : branches) {
                            for (int out = 0; out < 2; ++out) {
                                const Matrix& p = out ? p1 : p0;
                                Matrix rho = p * b.rho * p;
                                if (std::abs(rho.trace()) < 1e-14) continue;
                                for (int flip = 0; flip < (ins.arg > 0 ? 2 : 1); ++flip) {
                                    Branch nb;
                                    nb.rho = rho * (flip ? ins.arg : (ins.arg > 0 ? 1 - ins.arg : 1.0));
                                    nb.rec = b.rec;
                                    nb.rec.push_back(static_cast<uint8_t>(out ^ flip));
                                    next.push_back(std::move(nb));
                                }
                            }
                        }
                        branches = std::move(next);
                        ++num_records;
                    }
                    break;
                }
                case Op::R: {
                    for (uint32_t q : tg) {
                        Matrix p0 = projector(q, 0), p1 = projector(q, 1);
                        Matrix x = expand(gate_dense(Op::X), {q}, n_);
                        for (Branch& b : branches) {
                            b.rho = p0 * b.rho * p0 + x * p1 * b.rho * p1 * x.adjoint();
                        }
                    }
                    break;
                }
                case Op::X_ERROR: {
                    for (uint32_t q : tg) {
                        Matrix x = expand(gate_dense(Op::X), {q}, n_);
                        for (Branch& b : branches) {
                            b.rho = (1 - ins.arg) * b.rho + ins.arg * x * b.rho * x.adjoint();
                        }
                    }
                    break;
                }
                case Op::DEPOLARIZE1: {
                    for (uint32_t q : tg) {
                        std::vector<Matrix> ps;
                        for (char l : {'X', 'Y', 'Z'}) {
                            ps.push_back(expand(letter_matrix(l), {q}, n_));
                        }
                        for (Branch& b : branches) {
                            Matrix mixed = Matrix::Zero(dim, dim);
                            for (const Matrix& p : ps) mixed += p * b.rho * p.adjoint();
                            b.rho = (1 - ins.arg) * b.rho + (ins.arg / 3.0) * mixed;
                        }
                    }
                    break;
                }
                case Op::DEPOLARIZE2: {
                    for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                        std::vector<Matrix> ps;
                        for (char la : {'I', 'X', 'Y', 'Z'}) {
                            for (char lb : {'I', 'X', 'Y', 'Z'}) {
                                if (la == 'I' && lb == 'I') continue;
                                Matrix p = expand(letter_matrix(la), {tg[t]}, n_) *
                                           expand(letter_matrix(lb), {tg[t + 1]}, n_);
                                ps.push_back(std::move(p));
                            }
                        }
                        for (Branch& b : branches) {
                            Matrix mixed = Matrix::Zero(dim, dim);
                            for (const Matrix& p : ps) mixed += p * b.rho * p.adjoint();
                            b.rho = (1 - ins.arg) * b.rho + (ins.arg / 15.0) * mixed;
                        }
                    }
                    break;
                }
                default: {
                    Matrix u = gate_dense(ins.op);
                    std::size_t arity = u.rows() == 2 ? 1 : 2;
                    for (std::size_t t = 0; t + arity - 1 < tg.size(); t += arity) {
                        std::vector<uint32_t> sub(tg.begin() + t, tg.begin() + t + arity);
                        conjugate_all(expand(u, sub, n_));
                    }
                    break;
                }
            }
        }

        ExactDistribution out;
        out.record_rates.assign(num_records, 0.0);
        out.detector_rates.assign(detector_sets.size(), 0.0);
        out.observable_rates.assign(observable_sets.size(), 0.0);
        for (const auto& b : branches) {
            double w = b.rho.trace().real();
            for (std::size_t r = 0; r < b.rec.size(); ++r) {
                if (b.rec[r]) out.record_rates[r] += w;
            }
            for (std::size_t d = 0; d < detector_sets.size(); ++d) {
                int parity = 0;
                for (std::size_t r : detector_sets[d]) parity ^= b.rec[r];
                if (parity) out.detector_rates[d] += w;
            }
            for (std::size_t o = 0; o < observable_sets.size(); ++o) {
                int parity = 0;
                for (std::size_t r : observable_sets[o]) parity ^= b.rec[r];
                if (parity) out.observable_rates[o] += w;
            }
        }
        return out;
    }

  private:
    Matrix projector(uint32_t q, int outcome) const {
        std::size_t dim = std::size_t{1} << n_;
        Matrix p = Matrix::Zero(dim, dim);
        std::size_t mask = std::size_t{1} << q;
        for (std::size_t b = 0; b < dim; ++b) {
            if (((b & mask) != 0) == (outcome != 0)) p(b, b) = 1.0;
        }
        return p;
    }

    std::size_t n_;
};

}  // namespace fermistab::dense
