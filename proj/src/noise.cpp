#include "fermistab/noise.hpp"

#include <cctype>
#include <stdexcept>

namespace fermistab {

ErrorModel ErrorModel::standard_depolarizing(double p) {
    return ErrorModel{"sd", p, p, p, p};
}

ErrorModel ErrorModel::superconducting_inspired(double p) {
    return ErrorModel{"si", p / 10.0, p, 2.0 * p, 5.0 * p};
}

ErrorModel ErrorModel::from_name(const std::string& name, double p) {
    std::string t;
    for (char ch : name) {
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (t == "sd") return standard_depolarizing(p);
    if (t == "si") return superconducting_inspired(p);
    throw std::invalid_argument("unknown error model '" + name + "' (expected sd or si)");
}

Circuit apply_noise(const Circuit& c, const ErrorModel& model) {
    if (c.has_noise()) {
        throw std::invalid_argument("apply_noise requires a noise-free circuit");
    }
    if (model.p1 < 0 || model.p2 < 0 || model.ps < 0 || model.pm < 0 ||
        model.p1 > 1 || model.p2 > 1 || model.ps > 1 || model.pm > 1) {
        throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
    Circuit out;
    out.num_qubits = c.num_qubits;
    for (const Instruction& ins : c.instructions) {
        if (ins.op == Op::M) {
            out.append(Op::M, ins.targets, model.pm);
            continue;
        }
        out.append(ins);
        if (is_single_qubit_gate(ins.op) && model.p1 > 0) {
            out.append(Op::DEPOLARIZE1, ins.targets, model.p1);
        } else if (is_two_qubit_gate(ins.op) && model.p2 > 0) {
            out.append(Op::DEPOLARIZE2, ins.targets, model.p2);
        } else if (ins.op == Op::R && model.ps > 0) {
            out.append(Op::X_ERROR, ins.targets, model.ps);
        }
    }
    return out;
}

}  // namespace fermistab
