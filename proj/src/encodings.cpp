#include "fermistab/encodings.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fermistab {

const char* encoding_name(Encoding e) {
    switch (e) {
        case Encoding::JW: return "JW";
        case Encoding::TT: return "TT";
        case Encoding::DK: return "DK";
    }
    return "?";
}

Encoding encoding_from_name(const std::string& name) {
    std::string u;
    for (char c : name) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "JW") return Encoding::JW;
    if (u == "TT") return Encoding::TT;
    if (u == "DK") return Encoding::DK;
    throw std::invalid_argument("unknown encoding '" + name + "' (expected JW, TT or DK)");
}

// ---------------------------------------------------------------------------
// Jordan-Wigner

std::vector<PauliString> jw_majoranas(std::size_t n_modes, const std::vector<uint32_t>& ordering) {
    std::vector<uint32_t> ord = ordering;
    if (ord.empty()) {
        ord.resize(n_modes);
        std::iota(ord.begin(), ord.end(), 0);
    }
    if (ord.size() != n_modes) {
        throw std::invalid_argument("ordering size must equal the mode count");
    }
    std::vector<bool> seen(n_modes, false);
    for (uint32_t p : ord) {
        if (p >= n_modes || seen[p]) throw std::invalid_argument("ordering must be a permutation");
        seen[p] = true;
    }
    std::vector<PauliString> out(2 * n_modes, PauliString(n_modes));
    for (std::size_t m = 0; m < n_modes; ++m) {
        uint32_t p = ord[m];
        PauliString even(n_modes), odd(n_modes);
        for (uint32_t q = 0; q < p; ++q) {
            even.set_letter(q, 'Z');
            odd.set_letter(q, 'Z');
        }
        even.set_letter(p, 'X');
        odd.set_letter(p, 'Y');
        out[2 * m] = std::move(even);
        out[2 * m + 1] = std::move(odd);
    }
    return out;
}

EncodedTerm jw_encode(const FermiHubbardTerm& term, std::size_t n_modes,
                      const std::vector<uint32_t>& ordering) {
    for (int s = 0; s < (term.kind == TermKind::Number ? 1 : 2); ++s) {
        if (term.sites[s] >= n_modes) throw std::invalid_argument("term site out of range");
    }
    return encode_from_majoranas(term, jw_majoranas(n_modes, ordering));
}

// ---------------------------------------------------------------------------
// Ternary tree

namespace {

constexpr char kBranchLetter[3] = {'X', 'Y', 'Z'};

// Letters taken along the branches from the root down to (and excluding) v.
void fill_ancestor_letters(std::size_t v, PauliString& p) {
    while (v != 0) {
        std::size_t parent = (v - 1) / 3;
        p.set_letter(parent, kBranchLetter[(v - 1) % 3]);
        v = parent;
    }
}

// The path operator taking branch b at v and then descending along Z edges.
PauliString descent_path(const TernaryTree& tree, std::size_t v, int branch) {
    PauliString p(tree.n);
    fill_ancestor_letters(v, p);
    p.set_letter(v, kBranchLetter[branch]);
    if (tree.has_child(v, branch)) {
        std::size_t u = tree.child(v, branch);
        while (true) {
            p.set_letter(u, 'Z');
            if (!tree.has_child(u, 2)) break;
            u = tree.child(u, 2);
        }
    }
    return p;
}

// Per-qubit lexicographic order with I < X < Y < Z.
int letter_rank(char c) {
    switch (c) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Y': return 2;
        default: return 3;
    }
}

bool lex_less(const PauliString& a, const PauliString& b) {
    for (std::size_t q = 0; q < a.num_qubits(); ++q) {
        int ra = letter_rank(a.letter(q)), rb = letter_rank(b.letter(q));
        if (ra != rb) return ra < rb;
    }
    return false;
}

}  // namespace

std::vector<PauliString> TernaryTree::all_paths() const {
    std::vector<PauliString> out;
    out.reserve(2 * n + 1);
    for (std::size_t v = 0; v < n; ++v) {
        for (int b = 0; b < 3; ++b) {
            if (!has_child(v, b)) {
                PauliString p(n);
                fill_ancestor_letters(v, p);
                p.set_letter(v, kBranchLetter[b]);
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

TernaryTree build_ternary_tree(std::size_t n_modes) {
    if (n_modes < 1) throw std::invalid_argument("mode count must be positive");
    return TernaryTree{n_modes};
}

std::vector<PauliString> tt_majoranas(const TernaryTree& tree) {
    // Pair p_X(v), p_Y(v) per node; every vacant slot is consumed by exactly
    // one descent path except the all-Z path from the root.
    std::vector<std::size_t> nodes(tree.n);
    std::iota(nodes.begin(), nodes.end(), 0);
    std::vector<PauliString> px(tree.n), py(tree.n);
    for (std::size_t v = 0; v < tree.n; ++v) {
        px[v] = descent_path(tree, v, 0);
        py[v] = descent_path(tree, v, 1);
    }
    std::sort(nodes.begin(), nodes.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(px[a], px[b]); });
    std::vector<PauliString> out;
    out.reserve(2 * tree.n);
    for (std::size_t v : nodes) {
        out.push_back(px[v]);
        out.push_back(py[v]);
    }
    return out;
}

EncodedTerm tt_encode(const FermiHubbardTerm& term, const TernaryTree& tree) {
    for (int s = 0; s < (term.kind == TermKind::Number ? 1 : 2); ++s) {
        if (term.sites[s] >= tree.n) throw std::invalid_argument("term site out of range");
    }
    return encode_from_majoranas(term, tt_majoranas(tree));
}

// ---------------------------------------------------------------------------
// Derby-Klassen

namespace {

// E along the traversal a -> b; negated when the traversal opposes the arrow.
PauliString oriented_edge_op(const std::vector<PauliString>& edge_ops, const LatticeEdge& e,
                             uint32_t from, uint32_t to) {
    PauliString p = edge_ops[e.id];
    if (from == e.tail && to == e.head) return p;
    if (from == e.head && to == e.tail) {
        p.negate();
        return p;
    }
    throw std::logic_error("edge does not join the requested vertices");
}

}  // namespace

DkArtifacts::DkArtifacts(const SquareLattice& lattice) : lattice_(&lattice) {
    const std::size_t n = lattice.num_qubits();

    vertex_ops_.reserve(lattice.num_vertices());
    for (uint32_t v = 0; v < lattice.num_vertices(); ++v) {
        vertex_ops_.push_back(PauliString::single(n, lattice.vertex_qubit(v), 'Z'));
    }

    edge_ops_.reserve(lattice.num_edges());
    for (const LatticeEdge& e : lattice.edges()) {
        PauliString p(n);
        p.set_letter(lattice.vertex_qubit(e.tail), 'X');
        p.set_letter(lattice.vertex_qubit(e.head), 'Y');
        p.set_letter(lattice.face_qubit(e.blue_face), e.horizontal ? 'Y' : 'X');
        if (e.dir == EdgeDir::Up) p.negate();
        edge_ops_.push_back(std::move(p));
    }

    // S_k: clockwise product of the edge operators around red face k,
    // starting from the upper-left corner.
    std::vector<std::size_t> face_qubits;
    for (uint32_t f : lattice.blue_faces()) face_qubits.push_back(lattice.face_qubit(f));
    for (uint32_t face_id : lattice.red_faces()) {
        const LatticeFace& f = lattice.face(face_id);
        const auto& [i, j, l, m] = f.corners;
        PauliString s = oriented_edge_op(edge_ops_, lattice.edge(f.edges[2]), i, j);   // top
        s = multiply(s, oriented_edge_op(edge_ops_, lattice.edge(f.edges[1]), j, l));  // right
        s = multiply(s, oriented_edge_op(edge_ops_, lattice.edge(f.edges[0]), l, m));  // bottom
        s = multiply(s, oriented_edge_op(edge_ops_, lattice.edge(f.edges[3]), m, i));  // left
        if (s.phase_exponent() % 2 != 0) {
            throw std::logic_error("face loop product is not Hermitian");
        }
        PauliString face_part = s.restricted_to(face_qubits);
        face_part.set_phase_exponent(0);
        PauliString vertex_part = multiply(s, face_part);  // keeps the loop sign
        stabilizers_.push_back(std::move(s));
        face_parts_.push_back(std::move(face_part));
        vertex_parts_.push_back(std::move(vertex_part));
    }

    // The torus red faces obey one relation (the product of all S_k is the
    // identity up to phase), so destabilizers are computed for the first
    // L^2/2 - 1 stabilizers; the last syndrome entry is determined by the
    // rest.
    std::vector<PauliString> prefix(stabilizers_.begin(), stabilizers_.end() - 1);
    destabilizers_ = compute_destabilizers(prefix);

    check_invariants();
}

void DkArtifacts::check_invariants() const {
    const SquareLattice& lat = *lattice_;
    GeneratorSet stabs(stabilizers_);
    if (!stabs.mutually_commuting()) throw std::logic_error("stabilizers do not commute");
    for (const PauliString& s : stabilizers_) {
        for (const PauliString& v : vertex_ops_) {
            if (!commutes(s, v)) throw std::logic_error("stabilizer/vertex anticommutation");
        }
        for (const PauliString& e : edge_ops_) {
            if (!commutes(s, e)) throw std::logic_error("stabilizer/edge anticommutation");
        }
    }
    for (const LatticeEdge& e : lat.edges()) {
        const PauliString& op = edge_ops_[e.id];
        for (uint32_t v = 0; v < lat.num_vertices(); ++v) {
            bool endpoint = (v == e.tail || v == e.head);
            if (commutes(op, vertex_ops_[v]) == endpoint) {
                throw std::logic_error("edge/vertex commutation pattern broken");
            }
        }
    }
    if (lat.side() >= 4) {
        for (std::size_t k = 0; k < stabilizers_.size(); ++k) {
            const PauliString& s = stabilizers_[k];
            if (s.weight() != 8) throw std::logic_error("stabilizer weight is not 8");
            const LatticeFace& f = lat.face(lat.red_faces()[k]);
            for (uint32_t corner : f.corners) {
                if (s.letter(lat.vertex_qubit(corner)) != 'Z') {
                    throw std::logic_error("stabilizer corner letter is not Z");
                }
            }
            // Horizontal blue neighbours (via left/right edges) carry X,
            // vertical ones (via bottom/top edges) carry Y.
            for (int side : {3, 1}) {
                uint32_t fq = lat.face_qubit(lat.edge(f.edges[side]).blue_face);
                if (s.letter(fq) != 'X') throw std::logic_error("horizontal neighbour letter");
            }
            for (int side : {0, 2}) {
                uint32_t fq = lat.face_qubit(lat.edge(f.edges[side]).blue_face);
                if (s.letter(fq) != 'Y') throw std::logic_error("vertical neighbour letter");
            }
        }
    }
}

PauliString DkArtifacts::edge_op_reversed(uint32_t edge_id) const {
    PauliString p = edge_ops_.at(edge_id);
    p.negate();
    return p;
}

void DkArtifacts::update_edge_signs(const std::vector<int>& syndrome) {
    if (syndrome.size() != stabilizers_.size()) {
        throw std::invalid_argument("syndrome length must match the stabilizer count");
    }
    std::vector<int> prefix(syndrome.begin(), syndrome.end() - 1);
    PauliString recovery = recovery_from_syndrome(destabilizers_, prefix);
    for (PauliString& e : edge_ops_) {
        if (!commutes(e, recovery)) e.negate();
    }
}

std::string DkArtifacts::to_text() const {
    std::ostringstream out;
    out << "vertex operators:\n";
    for (std::size_t v = 0; v < vertex_ops_.size(); ++v) {
        out << "  V_" << v << " = " << vertex_ops_[v].to_string() << "\n";
    }
    out << "edge operators (tail->head):\n";
    for (const LatticeEdge& e : lattice_->edges()) {
        out << "  E_" << e.tail << "," << e.head << " = " << edge_ops_[e.id].to_string() << "\n";
    }
    out << "stabilizers:\n";
    for (std::size_t k = 0; k < stabilizers_.size(); ++k) {
        out << "  S_" << k << " = " << stabilizers_[k].to_string() << "\n";
    }
    return out.str();
}

DkArtifacts build_dk_artifacts(const SquareLattice& lattice) { return DkArtifacts(lattice); }

EncodedTerm dk_encode(const FermiHubbardTerm& term, const DkArtifacts& artifacts) {
    EncodedTerm out;
    out.term = term;
    const std::size_t n = artifacts.num_qubits();
    const SquareLattice& lat = artifacts.lattice();
    auto require_edge = [&]() -> const LatticeEdge& {
        if (term.edge_id == UINT32_MAX || term.edge_id >= lat.num_edges()) {
            throw std::invalid_argument("term sites are not lattice-adjacent");
        }
        const LatticeEdge& e = lat.edge(term.edge_id);
        bool forward = (e.tail == term.sites[0] && e.head == term.sites[1]);
        bool backward = (e.tail == term.sites[1] && e.head == term.sites[0]);
        if (!forward && !backward) {
            throw std::invalid_argument("term sites do not match the referenced edge");
        }
        return e;
    };
    switch (term.kind) {
        case TermKind::Hopping: {
            // hopping = -(i/2)(E_ij V_j + V_i E_ij) with (i, j) along the
            // arrow; the expression is symmetric under i <-> j.
            const LatticeEdge& e = require_edge();
            const PauliString& edge = artifacts.edge_op(e.id);
            const PauliString& vt = artifacts.vertex_op(e.tail);
            const PauliString& vh = artifacts.vertex_op(e.head);
            out.summands.push_back(real_summand(multiply(edge, vh), 0.5, 3));
            out.summands.push_back(real_summand(multiply(vt, edge), 0.5, 3));
            break;
        }
        case TermKind::Number: {
            if (term.sites[0] >= lat.num_vertices()) {
                throw std::invalid_argument("term site out of range");
            }
            out.summands.push_back({0.5, PauliString(n)});
            out.summands.push_back({-0.5, artifacts.vertex_op(term.sites[0])});
            break;
        }
        case TermKind::Coulomb: {
            const LatticeEdge& e = require_edge();
            PauliString zz = multiply(artifacts.vertex_op(e.tail), artifacts.vertex_op(e.head));
            out.summands.push_back({0.25, PauliString(n)});
            out.summands.push_back({-0.25, artifacts.vertex_op(e.tail)});
            out.summands.push_back({-0.25, artifacts.vertex_op(e.head)});
            out.summands.push_back(real_summand(std::move(zz), 0.25));
            break;
        }
    }
    tag_summand_groups(out);
    return out;
}

void update_edge_signs(DkArtifacts& artifacts, const std::vector<int>& syndrome) {
    artifacts.update_edge_signs(syndrome);
}

}  // namespace fermistab
