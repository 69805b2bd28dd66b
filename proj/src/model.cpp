#include "fermistab/model.hpp"

#include <stdexcept>

namespace fermistab {

FermiHubbardModel build_model(const SquareLattice& lattice, double t_hop, double u_coulomb) {
    FermiHubbardModel model;
    model.lattice = &lattice;
    model.t_hop = t_hop;
    model.u_coulomb = u_coulomb;
    model.terms.reserve(2 * lattice.num_edges());
    for (const LatticeEdge& e : lattice.edges()) {
        model.terms.push_back({TermKind::Hopping, {e.tail, e.head}, e.id});
    }
    for (const LatticeEdge& e : lattice.edges()) {
        model.terms.push_back({TermKind::Coulomb, {e.tail, e.head}, e.id});
    }
    return model;
}

void tag_summand_groups(EncodedTerm& term) {
    term.grouping.assign(term.summands.size(), -1);
    std::vector<PauliString> reps;  // support representative per tag
    for (std::size_t k = 0; k < term.summands.size(); ++k) {
        const PauliString& p = term.summands[k].pauli;
        if (p.is_identity()) continue;
        int tag = -1;
        for (std::size_t t = 0; t < reps.size(); ++t) {
            bool overlap = false;
            for (std::size_t q = 0; q < p.num_qubits() && !overlap; ++q) {
                overlap = (p.x(q) || p.z(q)) && (reps[t].x(q) || reps[t].z(q));
            }
            if (overlap) {
                tag = static_cast<int>(t);
                break;
            }
        }
        if (tag < 0) {
            tag = static_cast<int>(reps.size());
            reps.push_back(p);
        }
        term.grouping[k] = tag;
    }
}

EncodedSummand real_summand(PauliString p, double scale, int extra_quarter_turns) {
    int phase = (p.phase_exponent() + extra_quarter_turns) % 4;
    phase = (phase + 4) % 4;
    if (phase == 1 || phase == 3) {
        throw std::logic_error("summand phase is imaginary: " + p.to_string());
    }
    double coeff = (phase == 0) ? scale : -scale;
    p.set_phase_exponent(0);
    return {coeff, std::move(p)};
}

namespace {

PauliString vertex_op(const std::vector<PauliString>& majoranas, uint32_t j) {
    // V_j = -i g_2j g_{2j+1}; being a product of anticommuting Hermitians,
    // the raw product has phase +/-i and V_j is Hermitian.
    PauliString v = multiply(majoranas.at(2 * j), majoranas.at(2 * j + 1));
    v.set_phase_exponent(v.phase_exponent() + 3);
    return v;
}

}  // namespace

EncodedTerm encode_from_majoranas(const FermiHubbardTerm& term,
                                  const std::vector<PauliString>& majoranas) {
    EncodedTerm out;
    out.term = term;
    std::size_t n = majoranas.empty() ? 0 : majoranas.front().num_qubits();
    PauliString identity(n);
    switch (term.kind) {
        case TermKind::Hopping: {
            uint32_t i = term.sites[0], j = term.sites[1];
            out.summands.push_back(
                real_summand(multiply(majoranas.at(2 * i), majoranas.at(2 * j + 1)), 0.5, 1));
            out.summands.push_back(
                real_summand(multiply(majoranas.at(2 * j), majoranas.at(2 * i + 1)), 0.5, 1));
            break;
        }
        case TermKind::Number: {
            PauliString v = vertex_op(majoranas, term.sites[0]);
            out.summands.push_back({0.5, identity});
            out.summands.push_back(real_summand(std::move(v), -0.5));
            break;
        }
        case TermKind::Coulomb: {
            uint32_t i = term.sites[0], j = term.sites[1];
            PauliString vi = vertex_op(majoranas, i);
            PauliString vj = vertex_op(majoranas, j);
            PauliString vij = multiply(vi, vj);
            out.summands.push_back({0.25, identity});
            out.summands.push_back(real_summand(vi, -0.25));
            out.summands.push_back(real_summand(vj, -0.25));
            out.summands.push_back(real_summand(vij, 0.25));
            break;
        }
    }
    tag_summand_groups(out);
    return out;
}

}  // namespace fermistab
