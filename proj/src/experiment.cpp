#include "fermistab/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fermistab/rng.hpp"
#include "fermistab/rotations.hpp"
#include "fermistab/tableau.hpp"
#include "fermistab/trotter.hpp"

namespace fermistab {

namespace {

std::string fold_token(const std::string& name) {
    std::string out;
    for (char ch : name) {
        if (ch == '+' || ch == '-') out.push_back('_');
        else out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

[[noreturn]] void bad_spec(const std::string& message) {
    throw std::invalid_argument(message);
}

constexpr std::size_t kNoRec = static_cast<std::size_t>(-1);

// Circuit under construction together with its measurement-record counter.
struct Build {
    Circuit c;
    std::size_t recs = 0;

    void gate(Op op, std::initializer_list<uint32_t> targets, double arg = 0.0) {
        c.append(op, targets, arg);
        if (op == Op::M) recs += targets.size();
    }
    void gate(Op op, const std::vector<uint32_t>& targets, double arg = 0.0) {
        if (targets.empty()) return;
        c.append(op, targets, arg);
        if (op == Op::M) recs += targets.size();
    }
};

struct GadgetRecs {
    std::size_t aux = kNoRec;
    std::size_t flag = kNoRec;
};

// Indirect parity measurement of `p` via an aux qubit in |+>, coupling the
// data qubits in `order` (CX/CY/CZ per letter). When flagged, a flag qubit in
// |+> is CZ-coupled to the aux after the first and before the last data
// coupling; its X-basis outcome is 0 unless a fault hit the aux in between.
GadgetRecs append_parity_gadget(Build& b, uint32_t aux, uint32_t flag,
                                const PauliString& p,
                                const std::vector<uint32_t>& order, bool flagged) {
    if (order.size() < 2) throw std::logic_error("parity gadget needs weight >= 2");
    b.gate(Op::R, {aux});
    b.gate(Op::H, {aux});
    if (flagged) {
        b.gate(Op::R, {flag});
        b.gate(Op::H, {flag});
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (flagged && i + 1 == order.size()) b.gate(Op::CZ, {flag, aux});
        uint32_t q = order[i];
        switch (p.letter(q)) {
            case 'X': b.gate(Op::CX, {aux, q}); break;
            case 'Y': b.gate(Op::CY, {aux, q}); break;
            case 'Z': b.gate(Op::CZ, {aux, q}); break;
            default:
                throw std::logic_error("parity gadget coupling on identity letter");
        }
        if (flagged && i == 0) b.gate(Op::CZ, {flag, aux});
    }
    b.gate(Op::H, {aux});
    if (flagged) b.gate(Op::H, {flag});
    GadgetRecs out;
    out.aux = b.recs;
    b.gate(Op::M, {aux});
    if (flagged) {
        out.flag = b.recs;
        b.gate(Op::M, {flag});
    }
    return out;
}

// Coupling order for the plaquette operators: the four corner vertices
// clockwise from the upper-left, then the neighbouring blue-face qubits in
// top, right, left, bottom order. `include_corners` selects S_k vs T_k.
std::vector<uint32_t> plaquette_coupling_order(const SquareLattice& lat,
                                               uint32_t face_id, bool include_corners) {
    const LatticeFace& f = lat.face(face_id);
    std::vector<uint32_t> order;
    if (include_corners) {
        for (uint32_t v : f.corners) order.push_back(lat.vertex_qubit(v));
    }
    long x = static_cast<long>(f.x);
    long y = static_cast<long>(f.y);
    order.push_back(lat.face_qubit(lat.face_at(x, y + 1)));
    order.push_back(lat.face_qubit(lat.face_at(x + 1, y)));
    order.push_back(lat.face_qubit(lat.face_at(x - 1, y)));
    order.push_back(lat.face_qubit(lat.face_at(x, y - 1)));
    return order;
}

// Solves M x = v over GF(2) (square system given as dense 0/1 rows).
std::vector<uint8_t> gf2_solve(std::vector<std::vector<uint8_t>> m,
                               std::vector<uint8_t> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> pivot_col(n, kNoRec);
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t pr = row;
        while (pr < n && !m[pr][col]) ++pr;
        if (pr == n) continue;
        std::swap(m[pr], m[row]);
        std::swap(v[pr], v[row]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != row && m[r][col]) {
                for (std::size_t k = 0; k < n; ++k) m[r][k] ^= m[row][k];
                v[r] ^= v[row];
            }
        }
        pivot_col[row] = col;
        ++row;
    }
    for (std::size_t r = row; r < n; ++r) {
        if (v[r]) throw std::logic_error("occupation pattern is not reachable");
    }
    std::vector<uint8_t> x(n, 0);
    for (std::size_t r = 0; r < row; ++r) x[pivot_col[r]] = v[r];
    return x;
}

std::vector<uint32_t> ascending(std::size_t count) {
    std::vector<uint32_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<uint32_t>(i);
    return out;
}

// One hopping-readout target triple (tail, head, face qubits) plus the
// measured letter of each data qubit ('I' where the class does not reach).
struct HoppingPlan {
    std::vector<std::array<uint32_t, 3>> triples;  // by class edge order
    std::vector<uint32_t> edge_ids;
    std::vector<char> letters;  // per data qubit
};

HoppingPlan plan_hopping_readout(const SquareLattice& lat, const DkArtifacts& art,
                                 uint32_t color, bool yy) {
    HoppingPlan plan;
    plan.letters.assign(lat.num_qubits(), 'I');
    for (uint32_t edge_id : lat.color_class(color)) {
        const LatticeEdge& e = lat.edge(edge_id);
        FermiHubbardTerm term{TermKind::Hopping, {e.tail, e.head}, edge_id};
        EncodedTerm enc = dk_encode(term, art);
        const PauliString& p = enc.summands.at(yy ? 1 : 0).pauli;
        uint32_t a = lat.vertex_qubit(e.tail);
        uint32_t b = lat.vertex_qubit(e.head);
        uint32_t f = lat.face_qubit(e.blue_face);
        for (uint32_t q : {a, b, f}) {
            if (p.letter(q) == 'I') {
                throw std::logic_error("hopping summand does not cover its edge triple");
            }
            plan.letters[q] = p.letter(q);
        }
        plan.triples.push_back({a, b, f});
        plan.edge_ids.push_back(edge_id);
    }
    return plan;
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.readout == ReadoutKind::Hopping && spec.encoding != Encoding::DK) {
        bad_spec("hopping readout requires the DK encoding");
    }
    switch (spec.mitigation) {
        case Mitigation::None:
            break;
        case Mitigation::GP:
            if (spec.readout != ReadoutKind::Occupation) {
                bad_spec("GP requires occupation readout");
            }
            break;
        case Mitigation::SR:
            if (spec.encoding != Encoding::DK || spec.readout != ReadoutKind::Occupation) {
                bad_spec("SR requires occupation readout on the DK encoding");
            }
            break;
        case Mitigation::SM:
        case Mitigation::SMFlags:
        case Mitigation::VQED:
            if (spec.encoding != Encoding::DK || spec.readout != ReadoutKind::Hopping) {
                bad_spec("SM, SM+flags and VQED require hopping readout on the DK encoding");
            }
            break;
    }
    if (spec.encoding == Encoding::DK && spec.lattice_side < 4) {
        bad_spec("DK experiments require lattice side >= 4");
    }
    if (spec.kind == CircuitKind::FullTrotter && spec.trotter_steps < 1) {
        bad_spec("trotter_steps must be >= 1");
    }
    if (spec.kind == CircuitKind::RandomLogical &&
        !(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
        bad_spec("fraction must lie in (0, 1]");
    }
    if (spec.mitigation == Mitigation::VQED && spec.vqed_layers < 1) {
        bad_spec("vqed_layers must be >= 1");
    }
    if (spec.hopping_color >= 4) bad_spec("hopping_color must be in [0, 4)");
}

}  // namespace

const char* circuit_kind_name(CircuitKind k) {
    switch (k) {
        case CircuitKind::FullTrotter: return "full_trotter";
        case CircuitKind::RandomLogical: return "random_logical";
    }
    return "?";
}

const char* readout_kind_name(ReadoutKind k) {
    switch (k) {
        case ReadoutKind::Occupation: return "occupation";
        case ReadoutKind::Hopping: return "hopping";
    }
    return "?";
}

const char* mitigation_name(Mitigation m) {
    switch (m) {
        case Mitigation::None: return "none";
        case Mitigation::GP: return "gp";
        case Mitigation::SR: return "sr";
        case Mitigation::SM: return "sm";
        case Mitigation::SMFlags: return "sm_flags";
        case Mitigation::VQED: return "vqed";
    }
    return "?";
}

CircuitKind circuit_kind_from_name(const std::string& name) {
    std::string t = fold_token(name);
    if (t == "full_trotter" || t == "trotter") return CircuitKind::FullTrotter;
    if (t == "random_logical" || t == "random") return CircuitKind::RandomLogical;
    throw std::invalid_argument("unknown circuit kind '" + name +
                                "' (expected full_trotter or random_logical)");
}

ReadoutKind readout_kind_from_name(const std::string& name) {
    std::string t = fold_token(name);
    if (t == "occupation") return ReadoutKind::Occupation;
    if (t == "hopping") return ReadoutKind::Hopping;
    throw std::invalid_argument("unknown readout '" + name +
                                "' (expected occupation or hopping)");
}

Mitigation mitigation_from_name(const std::string& name) {
    std::string t = fold_token(name);
    if (t == "none") return Mitigation::None;
    if (t == "gp") return Mitigation::GP;
    if (t == "sr") return Mitigation::SR;
    if (t == "sm") return Mitigation::SM;
    if (t == "sm_flags" || t == "smflags") return Mitigation::SMFlags;
    if (t == "vqed") return Mitigation::VQED;
    throw std::invalid_argument("unknown mitigation '" + name +
                                "' (expected none, gp, sr, sm, sm_flags or vqed)");
}

std::string spec_violation(const ExperimentSpec& spec) {
    if (spec.lattice_side < 2 || spec.lattice_side % 2 != 0) {
        return "lattice side must be even and >= 2 (odd lattices admit undetectable "
               "errors)";
    }
    try {
        validate_spec(spec);
    } catch (const std::invalid_argument& err) {
        return err.what();
    }
    return {};
}

ExperimentCircuit assemble_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    SquareLattice lat(spec.lattice_side);
    FermiHubbardModel model = build_model(lat);
    const std::size_t n_modes = lat.num_vertices();

    std::vector<uint8_t> occupation = spec.occupation;
    if (occupation.empty()) occupation.assign(n_modes, 0);
    if (occupation.size() != n_modes) {
        bad_spec("occupation must list one 0/1 entry per lattice site");
    }
    for (uint8_t bit : occupation) {
        if (bit > 1) bad_spec("occupation must list one 0/1 entry per lattice site");
    }

    const bool is_dk = spec.encoding == Encoding::DK;
    const std::size_t num_data = is_dk ? lat.num_qubits() : n_modes;
    const bool gadget_mitigation = spec.mitigation == Mitigation::SM ||
                                   spec.mitigation == Mitigation::SMFlags ||
                                   spec.mitigation == Mitigation::VQED;
    const bool needs_aux =
        is_dk && (spec.readout == ReadoutKind::Occupation || gadget_mitigation);

    // Per-encoding machinery.
    std::optional<DkArtifacts> art;
    if (is_dk) art.emplace(lat);
    TernaryTree tree = build_ternary_tree(n_modes);
    std::vector<uint32_t> snake = lat.snake_order();
    std::vector<uint32_t> mode_line(n_modes, 0);  // JW: mode -> line index
    for (std::size_t s = 0; s < snake.size(); ++s) mode_line[snake[s]] = static_cast<uint32_t>(s);

    ExperimentCircuit out;
    out.spec = spec;
    out.num_data_qubits = num_data;

    Build b;
    b.c.num_qubits = static_cast<uint32_t>(num_data + (needs_aux ? 2 : 0));
    const uint32_t aux = static_cast<uint32_t>(num_data);
    const uint32_t flag = static_cast<uint32_t>(num_data + 1);

    std::vector<std::size_t> prep_flag_recs;
    std::vector<std::string> prep_flag_labels;
    std::vector<std::size_t> a_recs;  // prep plaquette outcomes by red ordinal

    HoppingPlan hopping;
    if (spec.readout == ReadoutKind::Hopping) {
        hopping = plan_hopping_readout(lat, *art, spec.hopping_color, spec.hopping_yy);
    }

    // ------------------------------------------------------------------
    // State preparation.
    const std::size_t n_stab = is_dk ? lat.red_faces().size() : 0;
    if (spec.readout == ReadoutKind::Occupation) {
        b.gate(Op::R, ascending(num_data));
        std::vector<uint32_t> x_targets;
        switch (spec.encoding) {
            case Encoding::JW:
                for (std::size_t s = 0; s < n_modes; ++s) {
                    if (occupation[snake[s]]) x_targets.push_back(static_cast<uint32_t>(s));
                }
                break;
            case Encoding::TT: {
                // All V_j are Z-strings; choose the bit pattern whose
                // parities over supp(V_j) realise the requested occupations.
                std::vector<std::vector<uint8_t>> rows(n_modes,
                                                       std::vector<uint8_t>(n_modes, 0));
                for (std::size_t j = 0; j < n_modes; ++j) {
                    FermiHubbardTerm num{TermKind::Number,
                                         {static_cast<uint32_t>(j), 0}, UINT32_MAX};
                    EncodedTerm enc = tt_encode(num, tree);
                    const PauliString& vj = enc.summands.at(1).pauli;
                    for (std::size_t q = 0; q < n_modes; ++q) {
                        char l = vj.letter(q);
                        if (l == 'Z') rows[j][q] = 1;
                        else if (l != 'I') throw std::logic_error("V_j is not a Z-string");
                    }
                }
                std::vector<uint8_t> bits = gf2_solve(rows, occupation);
                for (std::size_t q = 0; q < n_modes; ++q) {
                    if (bits[q]) x_targets.push_back(static_cast<uint32_t>(q));
                }
                break;
            }
            case Encoding::DK:
                for (std::size_t j = 0; j < n_modes; ++j) {
                    if (occupation[j]) {
                        x_targets.push_back(lat.vertex_qubit(static_cast<uint32_t>(j)));
                    }
                }
                break;
        }
        b.gate(Op::X, x_targets);
        if (is_dk) {
            // Blue faces: X eigenstates on even rows, Y on odd rows; the
            // odd-row plaquettes are then fixed by flagged T_k measurements.
            std::vector<uint32_t> h_targets, s_targets;
            for (uint32_t face_id : lat.blue_faces()) {
                uint32_t q = lat.face_qubit(face_id);
                h_targets.push_back(q);
                if (lat.face(face_id).y % 2 == 1) s_targets.push_back(q);
            }
            b.gate(Op::H, h_targets);
            b.gate(Op::S, s_targets);
            for (uint32_t k = 0; k < n_stab; ++k) {
                uint32_t face_id = lat.red_faces()[k];
                if (lat.red_face_row(face_id) % 2 == 0) continue;
                GadgetRecs recs = append_parity_gadget(
                    b, aux, flag, art->face_part(k),
                    plaquette_coupling_order(lat, face_id, false), true);
                prep_flag_recs.push_back(recs.flag);
                prep_flag_labels.push_back("prep_flag[" + std::to_string(k) + "]");
            }
        }
    } else {
        // Hopping readout: product eigenstate of every measured edge summand.
        b.gate(Op::R, ascending(num_data));
        std::vector<uint32_t> h_targets, s_targets;
        for (std::size_t q = 0; q < num_data; ++q) {
            char l = hopping.letters[q];
            if (l == 'I' && q >= n_modes) {
                // Defensive: faces outside the class keep the occupation-prep
                // convention (every blue face is covered for even L >= 4).
                uint32_t face_id = lat.blue_faces()[q - n_modes];
                h_targets.push_back(static_cast<uint32_t>(q));
                if (lat.face(face_id).y % 2 == 1) s_targets.push_back(static_cast<uint32_t>(q));
                continue;
            }
            if (l == 'X') {
                h_targets.push_back(static_cast<uint32_t>(q));
            } else if (l == 'Y') {
                h_targets.push_back(static_cast<uint32_t>(q));
                s_targets.push_back(static_cast<uint32_t>(q));
            }
        }
        b.gate(Op::H, h_targets);
        b.gate(Op::S, s_targets);
        if (gadget_mitigation) {
            for (uint32_t k = 0; k < n_stab; ++k) {
                GadgetRecs recs = append_parity_gadget(
                    b, aux, flag, art->stabilizer(k),
                    plaquette_coupling_order(lat, lat.red_faces()[k], true), true);
                a_recs.push_back(recs.aux);
                prep_flag_recs.push_back(recs.flag);
                prep_flag_labels.push_back("prep_flag[" + std::to_string(k) + "]");
            }
        }
    }
    out.prep_end = b.c.instructions.size();

    // ------------------------------------------------------------------
    // Mirrored logical fragment.
    Circuit fwd;
    fwd.num_qubits = b.c.num_qubits;
    if (spec.kind == CircuitKind::FullTrotter) {
        switch (spec.encoding) {
            case Encoding::JW: {
                JwSwapNetwork net(lat);
                for (int s = 0; s < spec.trotter_steps; ++s) {
                    net.append_step(fwd, spec.angle_eighths);
                }
                break;
            }
            case Encoding::TT:
                for (int s = 0; s < spec.trotter_steps; ++s) {
                    append_trotter_step_tt(fwd, model, tree, spec.angle_eighths);
                }
                break;
            case Encoding::DK:
                for (int s = 0; s < spec.trotter_steps; ++s) {
                    append_trotter_step_dk(fwd, *art, spec.angle_eighths);
                }
                break;
        }
    } else {
        std::vector<EncodedTerm> encoded;
        encoded.reserve(model.terms.size());
        for (const FermiHubbardTerm& term : model.terms) {
            switch (spec.encoding) {
                case Encoding::JW:
                    encoded.push_back(jw_encode(term, n_modes, mode_line));
                    break;
                case Encoding::TT:
                    encoded.push_back(tt_encode(term, tree));
                    break;
                case Encoding::DK:
                    encoded.push_back(dk_encode(term, *art));
                    break;
            }
        }
        std::size_t count = static_cast<std::size_t>(
            std::floor(spec.fraction * static_cast<double>(2 * n_modes)));
        count = std::min(count, encoded.size());
        append_random_logical(fwd, encoded, count, spec.logical_seed, spec.angle_eighths);
    }

    std::vector<Instruction> fragment = fwd.instructions;
    {
        std::vector<Instruction> inverse = inverted_gates(fwd.instructions);
        fragment.insert(fragment.end(), inverse.begin(), inverse.end());
    }

    std::vector<std::pair<std::size_t, uint32_t>> layer_recs;  // (aux rec, stabilizer k)
    if (spec.mitigation == Mitigation::VQED) {
        // Verification layers at (roughly) offsets l * len / m through the
        // mirrored fragment: a random stabilizer as Pauli gates (a twirl that
        // is logically the identity) plus an unflagged plaquette measurement.
        // A layer can only sit where every plaquette operator is restored,
        // i.e. between logical blocks, so each offset snaps to the nearest
        // such boundary.
        const std::size_t len = fragment.size();
        Circuit frag_c;
        frag_c.num_qubits = static_cast<uint32_t>(num_data);  // fragment is data-only
        frag_c.instructions = fragment;
        std::vector<PauliString> frames;
        std::vector<PauliString> refs;
        for (uint32_t k = 0; k < n_stab; ++k) {
            PauliString s = art->stabilizer(k);
            s.set_phase_exponent(0);
            frames.push_back(s);
            refs.push_back(s);
        }
        auto frames_restored = [&]() {
            for (uint32_t k = 0; k < n_stab; ++k) {
                PauliString f = frames[k];
                f.set_phase_exponent(0);
                if (!(f == refs[k])) return false;
            }
            return true;
        };
        std::vector<std::size_t> boundaries;
        if (frames_restored()) boundaries.push_back(0);
        for (std::size_t i = 0; i < len; ++i) {
            for (uint32_t k = 0; k < n_stab; ++k) {
                frames[k] = conjugate_through(frag_c, i, i + 1, frames[k]);
            }
            if (frames_restored()) boundaries.push_back(i + 1);
        }
        const std::size_t m = static_cast<std::size_t>(spec.vqed_layers);
        std::vector<std::size_t> offsets;
        for (std::size_t l = 1; l <= m; ++l) {
            std::size_t target = l * len / m;
            std::size_t best = boundaries.front();
            for (std::size_t v : boundaries) {
                std::size_t d_best = best > target ? best - target : target - best;
                std::size_t d_v = v > target ? v - target : target - v;
                if (d_v < d_best || (d_v == d_best && v > best)) best = v;
            }
            offsets.push_back(best);
        }
        std::mt19937_64 rng = make_stream(spec.vqed_seed, 0);
        std::size_t next = 0;
        for (std::size_t i = 0; i <= len; ++i) {
            while (next < offsets.size() && offsets[next] == i) {
                uint32_t twirl = static_cast<uint32_t>(rng() % n_stab);
                uint32_t check = static_cast<uint32_t>(rng() % n_stab);
                append_pauli_gates(b.c, art->stabilizer(twirl));
                GadgetRecs recs = append_parity_gadget(
                    b, aux, flag, art->stabilizer(check),
                    plaquette_coupling_order(lat, lat.red_faces()[check], true), false);
                layer_recs.emplace_back(recs.aux, check);
                ++next;
            }
            if (i < len) b.c.append(fragment[i]);
        }
    } else {
        for (const Instruction& ins : fragment) b.c.append(ins);
    }

    // ------------------------------------------------------------------
    // Syndrome extraction (SM / SM+flags) before the destructive readout.
    std::vector<std::size_t> b_recs;
    std::vector<std::size_t> ext_flag_recs;
    if (spec.mitigation == Mitigation::SM || spec.mitigation == Mitigation::SMFlags) {
        const bool ext_flagged = spec.mitigation == Mitigation::SMFlags;
        for (uint32_t k = 0; k < n_stab; ++k) {
            GadgetRecs recs = append_parity_gadget(
                b, aux, flag, art->stabilizer(k),
                plaquette_coupling_order(lat, lat.red_faces()[k], true), ext_flagged);
            b_recs.push_back(recs.aux);
            if (ext_flagged) ext_flag_recs.push_back(recs.flag);
        }
    }

    // ------------------------------------------------------------------
    // Destructive readout of every data qubit.
    if (spec.readout == ReadoutKind::Occupation) {
        if (is_dk && spec.mitigation == Mitigation::SR) {
            // Rotate each blue face onto its prepared basis so that even-row
            // plaquettes can be reassembled from the records.
            std::vector<uint32_t> h_targets, sdg_targets;
            for (uint32_t face_id : lat.blue_faces()) {
                uint32_t q = lat.face_qubit(face_id);
                h_targets.push_back(q);
                if (lat.face(face_id).y % 2 == 1) sdg_targets.push_back(q);
            }
            b.gate(Op::S_DAG, sdg_targets);
            b.gate(Op::H, h_targets);
        }
    } else {
        std::vector<uint32_t> h_targets, sdg_targets;
        for (std::size_t q = 0; q < num_data; ++q) {
            char l = hopping.letters[q];
            if (l == 'X') {
                h_targets.push_back(static_cast<uint32_t>(q));
            } else if (l == 'Y') {
                sdg_targets.push_back(static_cast<uint32_t>(q));
                h_targets.push_back(static_cast<uint32_t>(q));
            }
        }
        b.gate(Op::S_DAG, sdg_targets);
        b.gate(Op::H, h_targets);
    }
    const std::size_t readout_start = b.recs;
    b.gate(Op::M, ascending(num_data));

    // ------------------------------------------------------------------
    // Detectors.
    auto add_detector = [&](const std::vector<std::size_t>& abs_recs,
                            const std::string& label) {
        std::vector<uint32_t> offsets;
        for (std::size_t r : abs_recs) {
            offsets.push_back(static_cast<uint32_t>(b.recs - r));
        }
        b.c.append(Op::DETECTOR, offsets);
        out.detectors.push_back(DetectorInfo{label});
    };

    switch (spec.mitigation) {
        case Mitigation::None:
            break;
        case Mitigation::GP: {
            // Parity of the total particle number: the product of all V_j.
            std::vector<std::size_t> recs;
            if (spec.encoding == Encoding::TT) {
                PauliString prod(n_modes);
                for (std::size_t j = 0; j < n_modes; ++j) {
                    FermiHubbardTerm num{TermKind::Number,
                                         {static_cast<uint32_t>(j), 0}, UINT32_MAX};
                    prod = multiply(prod, tt_encode(num, tree).summands.at(1).pauli);
                }
                for (std::size_t q = 0; q < n_modes; ++q) {
                    if (prod.letter(q) != 'I') recs.push_back(readout_start + q);
                }
            } else {
                for (std::size_t j = 0; j < n_modes; ++j) {
                    uint32_t q = spec.encoding == Encoding::DK
                                     ? lat.vertex_qubit(static_cast<uint32_t>(j))
                                     : mode_line[j];
                    recs.push_back(readout_start + q);
                }
            }
            add_detector(recs, "gp_parity");
            break;
        }
        case Mitigation::SR: {
            for (std::size_t i = 0; i < prep_flag_recs.size(); ++i) {
                add_detector({prep_flag_recs[i]}, prep_flag_labels[i]);
            }
            for (uint32_t k = 0; k < n_stab; ++k) {
                uint32_t face_id = lat.red_faces()[k];
                if (lat.red_face_row(face_id) % 2 == 1) continue;
                std::vector<std::size_t> recs;
                const PauliString& sk = art->stabilizer(k);
                for (std::size_t q = 0; q < num_data; ++q) {
                    if (sk.letter(q) != 'I') recs.push_back(readout_start + q);
                }
                add_detector(recs, "plaquette[" + std::to_string(k) + "]");
            }
            break;
        }
        case Mitigation::SM:
        case Mitigation::SMFlags: {
            for (std::size_t i = 0; i < prep_flag_recs.size(); ++i) {
                add_detector({prep_flag_recs[i]}, prep_flag_labels[i]);
            }
            for (std::size_t i = 0; i < ext_flag_recs.size(); ++i) {
                add_detector({ext_flag_recs[i]}, "ext_flag[" + std::to_string(i) + "]");
            }
            for (uint32_t k = 0; k < n_stab; ++k) {
                add_detector({a_recs[k], b_recs[k]}, "syndrome[" + std::to_string(k) + "]");
            }
            break;
        }
        case Mitigation::VQED: {
            for (std::size_t i = 0; i < prep_flag_recs.size(); ++i) {
                add_detector({prep_flag_recs[i]}, prep_flag_labels[i]);
            }
            break;
        }
    }

    // ------------------------------------------------------------------
    // Observables.
    uint32_t obs_index = 0;
    auto add_observable = [&](const std::vector<std::size_t>& abs_recs,
                              const std::string& label) {
        std::vector<uint32_t> offsets;
        for (std::size_t r : abs_recs) {
            offsets.push_back(static_cast<uint32_t>(b.recs - r));
        }
        b.c.append(Op::OBSERVABLE_INCLUDE, offsets, static_cast<double>(obs_index));
        out.observables.push_back(ObservableInfo{label});
        ++obs_index;
    };

    if (spec.readout == ReadoutKind::Occupation) {
        for (std::size_t j = 0; j < n_modes; ++j) {
            std::vector<std::size_t> recs;
            switch (spec.encoding) {
                case Encoding::JW:
                    recs.push_back(readout_start + mode_line[j]);
                    break;
                case Encoding::TT: {
                    FermiHubbardTerm num{TermKind::Number,
                                         {static_cast<uint32_t>(j), 0}, UINT32_MAX};
                    EncodedTerm enc = tt_encode(num, tree);
                    const PauliString& vj = enc.summands.at(1).pauli;
                    for (std::size_t q = 0; q < n_modes; ++q) {
                        if (vj.letter(q) != 'I') recs.push_back(readout_start + q);
                    }
                    break;
                }
                case Encoding::DK:
                    recs.push_back(readout_start +
                                   lat.vertex_qubit(static_cast<uint32_t>(j)));
                    break;
            }
            add_observable(recs, "n[" + std::to_string(j) + "]");
        }
    } else {
        for (std::size_t i = 0; i < hopping.triples.size(); ++i) {
            const auto& t = hopping.triples[i];
            add_observable({readout_start + t[0], readout_start + t[1],
                            readout_start + t[2]},
                           "hop[" + std::to_string(hopping.edge_ids[i]) + "]");
        }
    }
    if (spec.mitigation == Mitigation::VQED) {
        out.vqed_b_start = obs_index;
        for (std::size_t l = 0; l < layer_recs.size(); ++l) {
            add_observable({layer_recs[l].first, a_recs.at(layer_recs[l].second)},
                           "vqed_b[" + std::to_string(l) + "]");
        }
    }

    // ------------------------------------------------------------------
    b.c.validate();
    DeterminismReport report = check_determinism(b.c);
    if (!report.deterministic) {
        throw std::logic_error("assembled experiment is not deterministic: " +
                               report.detail);
    }
    out.circuit = std::move(b.c);
    out.counts = GateCounts{out.circuit.count_1q_gates(), out.circuit.count_2q_gates()};
    return out;
}

}  // namespace fermistab
