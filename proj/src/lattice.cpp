#include "fermistab/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fermistab {

const char* edge_dir_name(EdgeDir dir) {
    switch (dir) {
        case EdgeDir::Right: return "right";
        case EdgeDir::Left: return "left";
        case EdgeDir::Up: return "up";
        case EdgeDir::Down: return "down";
    }
    return "?";
}

SquareLattice::SquareLattice(std::size_t side, bool flip_colors) : L_(side), flip_(flip_colors) {
    if (L_ < 2 || L_ % 2 != 0) {
        throw std::invalid_argument(
            "lattice side must be even and >= 2 (odd lattices admit undetectable errors); got " +
            std::to_string(L_));
    }
    const long L = static_cast<long>(L_);

    faces_.resize(num_faces());
    face_qubit_.assign(num_faces(), UINT32_MAX);
    red_ordinal_.assign(num_faces(), UINT32_MAX);
    for (long y = 0; y < L; ++y) {
        for (long x = 0; x < L; ++x) {
            LatticeFace& f = faces_[face_at(x, y)];
            f.id = face_at(x, y);
            f.x = static_cast<uint32_t>(x);
            f.y = static_cast<uint32_t>(y);
            f.blue = (((x + y) % 2 == 0) != flip_);
            f.corners = {vertex_at(x, y + 1), vertex_at(x + 1, y + 1), vertex_at(x + 1, y),
                         vertex_at(x, y)};
            f.edges = {h_edge_at(x, y), v_edge_at(x + 1, y), h_edge_at(x, y + 1), v_edge_at(x, y)};
            if (f.blue) {
                face_qubit_[f.id] = static_cast<uint32_t>(num_vertices() + blue_faces_.size());
                blue_faces_.push_back(f.id);
            } else {
                red_ordinal_[f.id] = static_cast<uint32_t>(red_faces_.size());
                red_faces_.push_back(f.id);
            }
        }
    }

    edges_.resize(num_edges());
    for (long y = 0; y < L; ++y) {
        for (long x = 0; x < L; ++x) {
            {
                LatticeEdge& e = edges_[h_edge_at(x, y)];
                e.id = h_edge_at(x, y);
                e.horizontal = true;
                e.dir = (y % 2 == 0) ? EdgeDir::Right : EdgeDir::Left;
                uint32_t a = vertex_at(x, y);
                uint32_t b = vertex_at(x + 1, y);
                e.tail = (e.dir == EdgeDir::Right) ? a : b;
                e.head = (e.dir == EdgeDir::Right) ? b : a;
                // Bordering faces: (x,y) above, (x,y-1) below; one of each colour.
                uint32_t above = face_at(x, y);
                uint32_t below = face_at(x, y - 1);
                e.blue_face = faces_[above].blue ? above : below;
                e.red_face = faces_[above].blue ? below : above;
            }
            {
                LatticeEdge& e = edges_[v_edge_at(x, y)];
                e.id = v_edge_at(x, y);
                e.horizontal = false;
                // Swapping the colours must also swap the vertical arrow
                // parity so that every red face stays a directed cycle.
                e.dir = ((x % 2 == 0) != flip_) ? EdgeDir::Up : EdgeDir::Down;
                uint32_t a = vertex_at(x, y);
                uint32_t b = vertex_at(x, y + 1);
                e.tail = (e.dir == EdgeDir::Up) ? a : b;
                e.head = (e.dir == EdgeDir::Up) ? b : a;
                // Bordering faces: (x,y) right, (x-1,y) left.
                uint32_t right = face_at(x, y);
                uint32_t left = face_at(x - 1, y);
                e.blue_face = faces_[right].blue ? right : left;
                e.red_face = faces_[right].blue ? left : right;
            }
        }
    }

    // Hopping classes: each edge sits on exactly one red face; its side there
    // (bottom/right/top/left) is its class.
    for (uint32_t rf : red_faces_) {
        const LatticeFace& f = faces_[rf];
        for (uint32_t side_idx = 0; side_idx < 4; ++side_idx) {
            LatticeEdge& e = edges_[f.edges[side_idx]];
            e.color_class = side_idx;
            classes_[side_idx].push_back(e.id);
        }
    }
    for (auto& cls : classes_) {
        std::sort(cls.begin(), cls.end());
    }
}

uint32_t SquareLattice::wrap(long c) const {
    const long L = static_cast<long>(L_);
    return static_cast<uint32_t>(((c % L) + L) % L);
}

uint32_t SquareLattice::vertex_at(long x, long y) const {
    return wrap(y) * static_cast<uint32_t>(L_) + wrap(x);
}

uint32_t SquareLattice::h_edge_at(long x, long y) const {
    return wrap(y) * static_cast<uint32_t>(L_) + wrap(x);
}

uint32_t SquareLattice::v_edge_at(long x, long y) const {
    return static_cast<uint32_t>(L_ * L_) + wrap(y) * static_cast<uint32_t>(L_) + wrap(x);
}

uint32_t SquareLattice::face_at(long x, long y) const {
    return wrap(y) * static_cast<uint32_t>(L_) + wrap(x);
}

uint32_t SquareLattice::vertex_qubit(uint32_t vertex_id) const {
    if (vertex_id >= num_vertices()) {
        throw std::out_of_range("vertex id out of range");
    }
    return vertex_id;
}

uint32_t SquareLattice::face_qubit(uint32_t face_id) const {
    uint32_t q = face_qubit_.at(face_id);
    if (q == UINT32_MAX) {
        throw std::invalid_argument("face " + std::to_string(face_id) +
                                    " is red and carries no qubit");
    }
    return q;
}

uint32_t SquareLattice::red_face_ordinal(uint32_t face_id) const {
    uint32_t k = red_ordinal_.at(face_id);
    if (k == UINT32_MAX) {
        throw std::invalid_argument("face " + std::to_string(face_id) + " is not red");
    }
    return k;
}

std::vector<uint32_t> SquareLattice::snake_order() const {
    std::vector<uint32_t> order;
    order.reserve(num_vertices());
    for (long y = 0; y < static_cast<long>(L_); ++y) {
        for (long i = 0; i < static_cast<long>(L_); ++i) {
            long x = (y % 2 == 0) ? i : static_cast<long>(L_) - 1 - i;
            order.push_back(vertex_at(x, y));
        }
    }
    return order;
}

std::string SquareLattice::to_text() const {
    std::ostringstream out;
    out << "lattice L=" << L_ << " vertices=" << num_vertices() << " edges=" << num_edges()
        << " qubits=" << num_qubits() << (flip_ ? " (colors flipped)" : "") << "\n";
    out << "faces:\n";
    for (const LatticeFace& f : faces_) {
        out << "  face " << f.id << " (" << f.x << "," << f.y << ") "
            << (f.blue ? "blue" : "red ");
        if (f.blue) {
            out << " qubit=" << face_qubit_[f.id];
        } else {
            out << " ordinal=" << red_ordinal_[f.id];
        }
        out << " corners=[" << f.corners[0] << "," << f.corners[1] << "," << f.corners[2] << ","
            << f.corners[3] << "]\n";
    }
    out << "edges:\n";
    for (const LatticeEdge& e : edges_) {
        out << "  edge " << e.id << (e.horizontal ? " h" : " v") << " " << e.tail << "->" << e.head
            << " dir=" << edge_dir_name(e.dir) << " blue_face=" << e.blue_face
            << " red_face=" << e.red_face << " class=" << e.color_class << "\n";
    }
    return out.str();
}

}  // namespace fermistab
