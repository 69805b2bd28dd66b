#include "fermistab/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace fermistab {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

// Phase exponent (power of i) contributed by the single-qubit product a*b,
// where a, b are letters encoded as (x, z) pairs. Letter products:
//   X*Y = iZ, Y*Z = iX, Z*X = iY and the reversed orders pick up -i.
int letter_phase(bool ax, bool az, bool bx, bool bz) {
    if (!(ax || az) || !(bx || bz)) return 0;     // identity involved
    if (ax == bx && az == bz) return 0;           // equal letters square to I
    // Distinct non-identity letters: cyclic order X->Y->Z->X gives +i.
    int a = ax ? (az ? 1 : 0) : 2;                // X=0, Y=1, Z=2
    int b = bx ? (bz ? 1 : 0) : 2;
    return ((b - a) % 3 + 3) % 3 == 1 ? 1 : 3;
}

}  // namespace

PauliString::PauliString(std::size_t num_qubits)
    : n_(num_qubits), x_(words_for(num_qubits), 0), z_(words_for(num_qubits), 0) {}

PauliString PauliString::from_string(const std::string& text) {
    std::size_t pos = 0;
    int phase = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        phase = text[pos] == '-' ? 2 : 0;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase = (phase + 1) & 3;
        ++pos;
    }
    PauliString p(text.size() - pos);
    for (std::size_t q = 0; pos < text.size(); ++q, ++pos) {
        p.set_letter(q, text[pos]);
    }
    p.phase_ = phase;
    return p;
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t qubit, char letter) {
    PauliString p(num_qubits);
    p.set_letter(qubit, letter);
    return p;
}

bool PauliString::x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
bool PauliString::z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }

void PauliString::set_x(std::size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v) x_[q >> 6] |= mask; else x_[q >> 6] &= ~mask;
}

void PauliString::set_z(std::size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v) z_[q >> 6] |= mask; else z_[q >> 6] &= ~mask;
}

char PauliString::letter(std::size_t q) const {
    bool xv = x(q), zv = z(q);
    if (xv && zv) return 'Y';
    if (xv) return 'X';
    if (zv) return 'Z';
    return 'I';
}

void PauliString::set_letter(std::size_t q, char letter) {
    switch (letter) {
        case 'I': set_x(q, false); set_z(q, false); break;
        case 'X': set_x(q, true); set_z(q, false); break;
        case 'Y': set_x(q, true); set_z(q, true); break;
        case 'Z': set_x(q, false); set_z(q, true); break;
        default: throw std::invalid_argument("invalid Pauli letter");
    }
}

void PauliString::set_phase_exponent(int k) { phase_ = ((k % 4) + 4) & 3; }

int PauliString::sign() const {
    if (phase_ == 0) return 1;
    if (phase_ == 2) return -1;
    throw std::logic_error("Pauli string has imaginary phase");
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        w += std::popcount(x_[i] | z_[i]);
    }
    return w;
}

bool PauliString::is_identity() const {
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (x_[i] | z_[i]) return false;
    }
    return true;
}

PauliString PauliString::restricted_to(const std::vector<std::size_t>& qubits) const {
    PauliString out(n_);
    for (std::size_t q : qubits) {
        out.set_x(q, x(q));
        out.set_z(q, z(q));
    }
    out.phase_ = phase_;
    return out;
}

std::string PauliString::to_string() const {
    std::string s;
    switch (phase_) {
        case 0: s = "+"; break;
        case 1: s = "+i"; break;
        case 2: s = "-"; break;
        case 3: s = "-i"; break;
    }
    for (std::size_t q = 0; q < n_; ++q) s.push_back(letter(q));
    return s;
}

bool PauliString::operator==(const PauliString& other) const {
    return n_ == other.n_ && phase_ == other.phase_ && x_ == other.x_ && z_ == other.z_;
}

bool PauliString::operator<(const PauliString& other) const {
    if (n_ != other.n_) return n_ < other.n_;
    if (x_ != other.x_) return x_ < other.x_;
    if (z_ != other.z_) return z_ < other.z_;
    return phase_ < other.phase_;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("Pauli size mismatch");
    PauliString out(a.n_);
    int phase = a.phase_ + b.phase_;
    for (std::size_t q = 0; q < a.n_; ++q) {
        bool ax = a.x(q), az = a.z(q), bx = b.x(q), bz = b.z(q);
        phase += letter_phase(ax, az, bx, bz);
        out.set_x(q, ax ^ bx);
        out.set_z(q, az ^ bz);
    }
    out.phase_ = phase & 3;
    return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("Pauli size mismatch");
    uint64_t acc = 0;
    for (std::size_t i = 0; i < a.x_.size(); ++i) {
        acc ^= (a.x_[i] & b.z_[i]) ^ (a.z_[i] & b.x_[i]);
    }
    return std::popcount(acc) % 2 == 0;
}

GeneratorSet::GeneratorSet(std::vector<PauliString> generators) : gens_(std::move(generators)) {}

std::size_t GeneratorSet::num_qubits() const {
    return gens_.empty() ? 0 : gens_.front().num_qubits();
}

bool GeneratorSet::mutually_commuting() const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        for (std::size_t j = i + 1; j < gens_.size(); ++j) {
            if (!commutes(gens_[i], gens_[j])) return false;
        }
    }
    return true;
}

namespace {

// Rows hold two n-bit blocks (x then z), each starting on a word boundary.
// Column c < n addresses x bit c; column c >= n addresses z bit c - n.
std::pair<std::size_t, uint64_t> block_column(std::size_t c, std::size_t n) {
    std::size_t words = (n + 63) / 64;
    std::size_t block = c < n ? 0 : 1;
    std::size_t offset = block ? c - n : c;
    return {block * words + (offset >> 6), uint64_t{1} << (offset & 63)};
}

// Rows are (x|z) bit vectors over GF(2); returns the rank after elimination.
std::size_t gf2_rank(std::vector<std::vector<uint64_t>> rows, std::size_t cols) {
    std::size_t n = cols / 2;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        auto [w, mask] = block_column(c, n);
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r][w] & mask)) {
                for (std::size_t k = 0; k < rows[r].size(); ++k) rows[r][k] ^= rows[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

std::vector<uint64_t> symplectic_row(const PauliString& p) {
    std::vector<uint64_t> row = p.x_words();
    const auto& z = p.z_words();
    row.insert(row.end(), z.begin(), z.end());
    return row;
}

}  // namespace

bool GeneratorSet::independent() const {
    if (gens_.empty()) return true;
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(gens_.size());
    for (const auto& g : gens_) rows.push_back(symplectic_row(g));
    return gf2_rank(rows, 2 * num_qubits()) == gens_.size();
}

bool GeneratorSet::contains_up_to_phase(const PauliString& p) const {
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(gens_.size());
    for (const auto& g : gens_) rows.push_back(symplectic_row(g));
    std::size_t base = gf2_rank(rows, 2 * num_qubits());
    rows.push_back(symplectic_row(p));
    return gf2_rank(rows, 2 * num_qubits()) == base;
}

std::vector<PauliString> compute_destabilizers(const std::vector<PauliString>& gens) {
    if (gens.empty()) return {};
    std::size_t m = gens.size();
    std::size_t n = gens.front().num_qubits();
    GeneratorSet gs(gens);
    if (!gs.mutually_commuting()) throw std::invalid_argument("generators must commute");
    if (!gs.independent()) throw std::invalid_argument("generators must be independent");

    // Destabilizer d (unknown 2n bits [dx|dz]) must satisfy, for each gen g_j:
    //   <g_j, d>_symplectic = g_j.x . dz + g_j.z . dx = delta_ij  (mod 2).
    // Build A = [Gz | Gx] (m x 2n) and solve A d = e_i for each i with one
    // Gaussian elimination, choosing lowest-index pivot columns.
    std::size_t words = (n + 63) / 64;
    std::size_t aug_words = 2 * words + (m + 63) / 64;
    std::vector<std::vector<uint64_t>> rows(m, std::vector<uint64_t>(aug_words, 0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& zx = gens[i].z_words();
        const auto& xw = gens[i].x_words();
        for (std::size_t w = 0; w < words; ++w) {
            rows[i][w] = zx[w];              // coefficient of dx
            rows[i][words + w] = xw[w];      // coefficient of dz
        }
        rows[i][2 * words + (i >> 6)] |= uint64_t{1} << (i & 63);  // augmented e_i
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < 2 * n && rank < m; ++c) {
        auto [w, mask] = block_column(c, n);
        std::size_t pivot = rank;
        while (pivot < m && !(rows[pivot][w] & mask)) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r != rank && (rows[r][w] & mask)) {
                for (std::size_t k = 0; k < aug_words; ++k) rows[r][k] ^= rows[rank][k];
            }
        }
        pivot_col.push_back(c);
        ++rank;
    }
    if (rank != m) throw std::logic_error("destabilizer system is rank deficient");

    std::vector<PauliString> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        PauliString d(n);
        // Solution: for each pivot row r, variable pivot_col[r] takes the
        // augmented bit for e_i; all free variables are 0.
        for (std::size_t r = 0; r < m; ++r) {
            bool bit = (rows[r][2 * words + (i >> 6)] >> (i & 63)) & 1;
            if (!bit) continue;
            std::size_t c = pivot_col[r];
            if (c < n) d.set_x(c, d.x(c) ^ 1);
            else d.set_z(c - n, d.z(c - n) ^ 1);
        }
        out.push_back(d);
    }
    return out;
}

PauliString recovery_from_syndrome(const std::vector<PauliString>& destabilizers,
                                   const std::vector<int>& syndrome) {
    if (destabilizers.size() != syndrome.size()) {
        throw std::invalid_argument("syndrome length mismatch");
    }
    if (destabilizers.empty()) return PauliString(0);
    PauliString out(destabilizers.front().num_qubits());
    for (std::size_t i = 0; i < syndrome.size(); ++i) {
        if (syndrome[i] == -1) {
            out = multiply(out, destabilizers[i]);
        } else if (syndrome[i] != 1) {
            throw std::invalid_argument("syndrome entries must be +1 or -1");
        }
    }
    out.set_phase_exponent(0);
    return out;
}

}  // namespace fermistab
