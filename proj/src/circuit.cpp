#include "fermistab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fermistab {

namespace {

struct OpInfo {
    const char* name;
    bool unitary;
    int arity;       // 1 or 2 for gates; 0 when not applicable
    bool noise;
    bool annotation;
};

const OpInfo& info(Op op) {
    static const OpInfo table[] = {
        {"H", true, 1, false, false},
        {"S", true, 1, false, false},
        {"S_DAG", true, 1, false, false},
        {"SQRT_X", true, 1, false, false},
        {"SQRT_X_DAG", true, 1, false, false},
        {"SQRT_Y", true, 1, false, false},
        {"SQRT_Y_DAG", true, 1, false, false},
        {"X", true, 1, false, false},
        {"Y", true, 1, false, false},
        {"Z", true, 1, false, false},
        {"CX", true, 2, false, false},
        {"CZ", true, 2, false, false},
        {"CY", true, 2, false, false},
        {"SWAP", true, 2, false, false},
        {"M", false, 1, false, false},
        {"R", false, 1, false, false},
        {"DEPOLARIZE1", false, 1, true, false},
        {"DEPOLARIZE2", false, 2, true, false},
        {"X_ERROR", false, 1, true, false},
        {"DETECTOR", false, 0, false, true},
        {"OBSERVABLE_INCLUDE", false, 0, false, true},
    };
    return table[static_cast<int>(op)];
}

}  // namespace

const char* op_name(Op op) { return info(op).name; }
bool is_unitary(Op op) { return info(op).unitary; }
bool is_single_qubit_gate(Op op) { return info(op).unitary && info(op).arity == 1; }
bool is_two_qubit_gate(Op op) { return info(op).unitary && info(op).arity == 2; }
bool is_noise(Op op) { return info(op).noise; }
bool is_annotation(Op op) { return info(op).annotation; }

Op gate_inverse(Op op) {
    switch (op) {
        case Op::S: return Op::S_DAG;
        case Op::S_DAG: return Op::S;
        case Op::SQRT_X: return Op::SQRT_X_DAG;
        case Op::SQRT_X_DAG: return Op::SQRT_X;
        case Op::SQRT_Y: return Op::SQRT_Y_DAG;
        case Op::SQRT_Y_DAG: return Op::SQRT_Y;
        default:
            if (!is_unitary(op)) throw std::invalid_argument("inverse of non-unitary op");
            return op;  // H, Paulis, CX, CZ, CY, SWAP are self-inverse
    }
}

void Circuit::append(Op op, std::initializer_list<uint32_t> targets, double arg) {
    instructions.push_back(Instruction{op, arg, std::vector<uint32_t>(targets)});
}

void Circuit::append(Op op, const std::vector<uint32_t>& targets, double arg) {
    instructions.push_back(Instruction{op, arg, targets});
}

void Circuit::extend(const Circuit& other) {
    num_qubits = std::max(num_qubits, other.num_qubits);
    instructions.insert(instructions.end(), other.instructions.begin(),
                        other.instructions.end());
}

std::size_t Circuit::count_measurements() const {
    std::size_t n = 0;
    for (const auto& ins : instructions) {
        if (ins.op == Op::M) n += ins.targets.size();
    }
    return n;
}

std::size_t Circuit::count_detectors() const {
    std::size_t n = 0;
    for (const auto& ins : instructions) {
        if (ins.op == Op::DETECTOR) ++n;
    }
    return n;
}

std::size_t Circuit::count_observables() const {
    long long max_index = -1;
    for (const auto& ins : instructions) {
        if (ins.op == Op::OBSERVABLE_INCLUDE) {
            max_index = std::max(max_index, static_cast<long long>(ins.arg));
        }
    }
    return static_cast<std::size_t>(max_index + 1);
}

std::size_t Circuit::count_1q_gates() const {
    std::size_t n = 0;
    for (const auto& ins : instructions) {
        if (is_single_qubit_gate(ins.op)) n += ins.targets.size();
    }
    return n;
}

std::size_t Circuit::count_2q_gates() const {
    std::size_t n = 0;
    for (const auto& ins : instructions) {
        if (is_two_qubit_gate(ins.op)) n += ins.targets.size() / 2;
    }
    return n;
}

bool Circuit::has_noise() const {
    for (const auto& ins : instructions) {
        if (is_noise(ins.op)) return true;
        if (ins.op == Op::M && ins.arg != 0.0) return true;
    }
    return false;
}

void Circuit::validate() const {
    std::size_t records = 0;
    std::size_t num_detectors = 0;
    for (const auto& ins : instructions) {
        const auto& i = info(ins.op);
        if (i.annotation) {
            if (ins.targets.empty()) {
                throw std::invalid_argument(std::string(i.name) + " needs record targets");
            }
            for (uint32_t k : ins.targets) {
                if (k == 0 || k > records) {
                    throw std::invalid_argument(std::string(i.name) +
                                                " references a record that does not exist yet");
                }
            }
            if (ins.op == Op::OBSERVABLE_INCLUDE &&
                (ins.arg < 0 || ins.arg != std::floor(ins.arg))) {
                throw std::invalid_argument("OBSERVABLE_INCLUDE index must be a whole number");
            }
            if (ins.op == Op::DETECTOR) ++num_detectors;
            continue;
        }
        if (ins.targets.empty()) {
            throw std::invalid_argument(std::string(i.name) + " needs targets");
        }
        if (i.arity == 2) {
            if (ins.targets.size() % 2 != 0) {
                throw std::invalid_argument(std::string(i.name) +
                                            " needs an even number of targets");
            }
            for (std::size_t t = 0; t < ins.targets.size(); t += 2) {
                if (ins.targets[t] == ins.targets[t + 1]) {
                    throw std::invalid_argument(std::string(i.name) +
                                                " targets must be distinct qubits");
                }
            }
        }
        for (uint32_t q : ins.targets) {
            if (q >= num_qubits) {
                throw std::invalid_argument(std::string(i.name) + " target " +
                                            std::to_string(q) + " is out of range");
            }
        }
        if (i.noise || ins.op == Op::M) {
            if (ins.arg < 0.0 || ins.arg > 1.0) {
                throw std::invalid_argument(std::string(i.name) +
                                            " probability must be in [0, 1]");
            }
        }
        if (ins.op == Op::M) records += ins.targets.size();
    }
    (void)num_detectors;
}

namespace {

std::string format_arg(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string Circuit::to_text() const {
    std::ostringstream out;
    for (const auto& ins : instructions) {
        out << op_name(ins.op);
        bool wants_arg = is_noise(ins.op) || ins.op == Op::OBSERVABLE_INCLUDE ||
                         (ins.op == Op::M && ins.arg != 0.0);
        if (wants_arg) out << '(' << format_arg(ins.arg) << ')';
        if (is_annotation(ins.op)) {
            for (uint32_t k : ins.targets) out << " rec[-" << k << ']';
        } else {
            for (uint32_t q : ins.targets) out << ' ' << q;
        }
        out << '\n';
    }
    return out.str();
}

Circuit Circuit::from_text(const std::string& text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    uint32_t max_qubit = 0;
    bool any_qubit = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        line = line.substr(start, end - start + 1);

        std::string name;
        std::size_t p = 0;
        while (p < line.size() && line[p] != ' ' && line[p] != '(' && line[p] != '\t') {
            name.push_back(line[p++]);
        }
        double arg = 0.0;
        if (p < line.size() && line[p] == '(') {
            std::size_t close = line.find(')', p);
            if (close == std::string::npos) throw std::invalid_argument("unterminated '('");
            arg = std::stod(line.substr(p + 1, close - p - 1));
            p = close + 1;
        }

        Op op;
        bool found = false;
        for (int k = 0; k <= static_cast<int>(Op::OBSERVABLE_INCLUDE); ++k) {
            if (name == op_name(static_cast<Op>(k))) {
                op = static_cast<Op>(k);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("unknown operation: " + name);

        Instruction ins{op, arg, {}};
        std::istringstream rest(line.substr(p));
        std::string tok;
        while (rest >> tok) {
            if (is_annotation(op)) {
                if (tok.rfind("rec[-", 0) != 0 || tok.back() != ']') {
                    throw std::invalid_argument("annotation target must look like rec[-k]");
                }
                ins.targets.push_back(
                    static_cast<uint32_t>(std::stoul(tok.substr(5, tok.size() - 6))));
            } else {
                uint32_t q = static_cast<uint32_t>(std::stoul(tok));
                ins.targets.push_back(q);
                max_qubit = std::max(max_qubit, q);
                any_qubit = true;
            }
        }
        c.instructions.push_back(std::move(ins));
    }
    c.num_qubits = any_qubit ? max_qubit + 1 : 0;
    c.validate();
    return c;
}

std::vector<Instruction> inverted_gates(const std::vector<Instruction>& gates) {
    std::vector<Instruction> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        if (!is_unitary(it->op)) {
            throw std::invalid_argument("cannot invert a non-unitary instruction");
        }
        Instruction inv = *it;
        inv.op = gate_inverse(it->op);
        // Multi-target batches apply left to right; reverse the batch too.
        if (is_single_qubit_gate(inv.op)) {
            std::reverse(inv.targets.begin(), inv.targets.end());
        } else {
            std::vector<uint32_t> rev;
            rev.reserve(inv.targets.size());
            for (std::size_t i = inv.targets.size(); i >= 2; i -= 2) {
                rev.push_back(inv.targets[i - 2]);
                rev.push_back(inv.targets[i - 1]);
            }
            inv.targets = std::move(rev);
        }
        out.push_back(std::move(inv));
    }
    return out;
}

}  // namespace fermistab
