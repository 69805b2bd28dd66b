#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fermistab {

// Arrow direction of an oriented lattice edge.
enum class EdgeDir { Right, Left, Up, Down };

const char* edge_dir_name(EdgeDir dir);

// One oriented edge of the periodic square lattice. `tail -> head` follows the
// arrow. Horizontal edge h(x,y) joins (x,y)-(x+1,y) and has id y*L + x;
// vertical edge v(x,y) joins (x,y)-(x,y+1) and has id L^2 + y*L + x.
struct LatticeEdge {
    uint32_t id = 0;
    uint32_t tail = 0;
    uint32_t head = 0;
    bool horizontal = false;
    EdgeDir dir = EdgeDir::Right;
    uint32_t blue_face = 0;    // the unique blue face bordering this edge
    uint32_t red_face = 0;     // the unique red face bordering this edge
    uint32_t color_class = 0;  // hopping schedule class: the side this edge
                               // occupies on its red face (0=bottom, 1=right,
                               // 2=top, 3=left)
};

// One face (plaquette) of the lattice; face (x,y) has lower-left corner (x,y)
// and id y*L + x. Corners are listed clockwise from the upper-left corner;
// boundary edges are listed as bottom, right, top, left.
struct LatticeFace {
    uint32_t id = 0;
    uint32_t x = 0;
    uint32_t y = 0;
    bool blue = false;
    std::array<uint32_t, 4> corners{};  // upper-left, upper-right, lower-right, lower-left
    std::array<uint32_t, 4> edges{};    // bottom, right, top, left
};

// Geometry of the L x L periodic square lattice used by the encodings:
// vertices, oriented edges, two-coloured faces, and the qubit layout that
// places one qubit on each vertex and one on each blue face.
//
// Fixed conventions (flip_colors swaps the two colour classes, together with
// the vertical arrow parity, so that every red face remains a directed
// cycle):
//   - face (x,y) is blue iff x + y is even;
//   - horizontal edges point right in even rows, left in odd rows;
//   - vertical edges point up in even columns, down in odd columns;
//   - vertex qubits are row-major in [0, L^2);
//   - blue-face qubits are row-major in [L^2, 3L^2/2).
class SquareLattice {
  public:
    // Throws std::invalid_argument unless L is even and >= 2.
    explicit SquareLattice(std::size_t side, bool flip_colors = false);

    std::size_t side() const { return L_; }
    bool colors_flipped() const { return flip_; }

    std::size_t num_vertices() const { return L_ * L_; }
    std::size_t num_edges() const { return 2 * L_ * L_; }
    std::size_t num_faces() const { return L_ * L_; }
    // Vertex qubits plus blue-face qubits.
    std::size_t num_qubits() const { return L_ * L_ + L_ * L_ / 2; }

    // Periodic coordinate helpers.
    uint32_t wrap(long c) const;
    uint32_t vertex_at(long x, long y) const;
    uint32_t h_edge_at(long x, long y) const;
    uint32_t v_edge_at(long x, long y) const;
    uint32_t face_at(long x, long y) const;

    const std::vector<LatticeEdge>& edges() const { return edges_; }
    const LatticeEdge& edge(uint32_t id) const { return edges_.at(id); }
    const std::vector<LatticeFace>& faces() const { return faces_; }
    const LatticeFace& face(uint32_t id) const { return faces_.at(id); }

    bool face_is_blue(uint32_t face_id) const { return faces_.at(face_id).blue; }

    // Vertex id -> qubit index (the identity map, kept explicit for clarity).
    uint32_t vertex_qubit(uint32_t vertex_id) const;
    // Blue face id -> qubit index in [L^2, 3L^2/2). Throws for red faces.
    uint32_t face_qubit(uint32_t face_id) const;

    // Face ids of each colour, row-major; red_faces()[k] is red face ordinal k.
    const std::vector<uint32_t>& blue_faces() const { return blue_faces_; }
    const std::vector<uint32_t>& red_faces() const { return red_faces_; }
    // Red face id -> ordinal in red_faces(). Throws for blue faces.
    uint32_t red_face_ordinal(uint32_t face_id) const;
    // Lattice row y of a red face, used by the readout schedules.
    uint32_t red_face_row(uint32_t face_id) const { return faces_.at(face_id).y; }

    // Edge ids in hopping class c (ascending); the classes partition the edges
    // into 4 sets of L^2/2, each vertex-disjoint.
    const std::vector<uint32_t>& color_class(uint32_t c) const { return classes_.at(c); }

    // Vertex ids in boustrophedon order: row 0 left-to-right, row 1
    // right-to-left, ... Defines the JW mode order on the lattice.
    std::vector<uint32_t> snake_order() const;

    // Human-readable dump of the vertex/edge/face tables.
    std::string to_text() const;

  private:
    std::size_t L_ = 0;
    bool flip_ = false;
    std::vector<LatticeEdge> edges_;
    std::vector<LatticeFace> faces_;
    std::vector<uint32_t> face_qubit_;  // per face id; UINT32_MAX for red faces
    std::vector<uint32_t> blue_faces_;
    std::vector<uint32_t> red_faces_;
    std::vector<uint32_t> red_ordinal_;  // per face id; UINT32_MAX for blue faces
    std::array<std::vector<uint32_t>, 4> classes_;
};

}  // namespace fermistab
